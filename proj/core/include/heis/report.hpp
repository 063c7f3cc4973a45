#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace heis::report {

struct CheckRow {
    std::string name;
    std::string paper_ref;  // short description of the identity checked
    nlohmann::json inputs = nlohmann::json::object();
    double residual = 0;
    double tol = 0;
    bool pass = false;
    bool skipped = false;
};

struct VerificationReport {
    std::vector<CheckRow> checks;
    std::vector<std::string> errata;
    std::vector<std::string> assumptions;

    // Adds a row with pass = residual <= tol (false for non-finite residuals).
    CheckRow& add(std::string name, std::string ref, nlohmann::json inputs, double residual, double tol);
    CheckRow& skip(std::string name, std::string ref, std::string reason);
    void merge(const VerificationReport& other);
    bool all_pass() const;
};

// Corrections applied relative to the printed formulas.
std::vector<std::string> standard_errata();

nlohmann::json to_json(const VerificationReport& r);
// One line per check: name,paper_ref,residual,tol,pass,skipped,inputs(JSON).
std::string to_csv(const VerificationReport& r);

// Writes to path via a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace heis::report
