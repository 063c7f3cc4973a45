#include "heis/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heis/types.hpp"

namespace heis::report {

CheckRow& VerificationReport::add(std::string name, std::string ref, nlohmann::json inputs, double residual,
                                  double tol)
{
    CheckRow row;
    row.name = std::move(name);
    row.paper_ref = std::move(ref);
    row.inputs = std::move(inputs);
    row.residual = residual;
    row.tol = tol;
    row.pass = std::isfinite(residual) && residual <= tol;
    checks.push_back(std::move(row));
    return checks.back();
}

CheckRow& VerificationReport::skip(std::string name, std::string ref, std::string reason)
{
    CheckRow row;
    row.name = std::move(name);
    row.paper_ref = std::move(ref);
    row.inputs = {{"skipped", reason}};
    row.pass = true;
    row.skipped = true;
    checks.push_back(std::move(row));
    return checks.back();
}

void VerificationReport::merge(const VerificationReport& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    for (const auto& e : other.errata)
        if (std::find(errata.begin(), errata.end(), e) == errata.end())
            errata.push_back(e);
    for (const auto& a : other.assumptions)
        if (std::find(assumptions.begin(), assumptions.end(), a) == assumptions.end())
            assumptions.push_back(a);
}

bool VerificationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

std::vector<std::string> standard_errata()
{
    return {
        "theta multiplier: (c/d) eps_d^{-1}, i.e. 1 for d = 1 mod 4 and -i for d = 3 mod 4 (theta-series oracle)",
        "Whittaker integral: kernel e^{-u}, not e^{-1}",
        "Eisenstein summand: nu(g)^{-1} r(s^{-1}, g)^{-1} j(s^{-1} g, z)^{-1} Im(s^{-1} g z)^w with s the scaling "
        "matrix",
        "singular cusp: nu(g_a) r(s_a^{-1}, g_a) = 1 rather than nu(g_a) = 1",
        "contiguity: c F(a,b;c) - c F(a+1,b;c) + b z F(a+1,b+1;c+1) = 0",
        "Riemann split: alpha^{s} Lambda on the left, dual function evaluated at (i - u) Y / alpha",
        "residue term: a_check pairs with X^{-w} and b_check with X^{w-1}, a with y^w and b with y^{1-w}",
    };
}

nlohmann::json to_json(const VerificationReport& r)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json row = {{"name", c.name},   {"paper_ref", c.paper_ref}, {"inputs", c.inputs},
                              {"residual", c.residual}, {"tol", c.tol},      {"pass", c.pass}};
        if (c.skipped)
            row["skipped"] = true;
        if (!std::isfinite(c.residual))
            row["residual"] = nullptr;
        checks.push_back(std::move(row));
    }
    return {{"checks", checks}, {"errata", r.errata}, {"assumptions", r.assumptions}};
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string to_csv(const VerificationReport& r)
{
    std::ostringstream os;
    os << "name,paper_ref,residual,tol,pass,skipped,inputs\n";
    os.precision(17);
    for (const auto& c : r.checks)
        os << csv_field(c.name) << ',' << csv_field(c.paper_ref) << ',' << c.residual << ',' << c.tol << ','
           << (c.pass ? "true" : "false") << ',' << (c.skipped ? "true" : "false") << ','
           << csv_field(c.inputs.dump()) << '\n';
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
}

}  // namespace heis::report
