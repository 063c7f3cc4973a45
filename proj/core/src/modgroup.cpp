#include "heis/modgroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "heis/arith.hpp"
#include "heis/automorphy.hpp"

namespace heis::modgroup {

ModularMatrix ModularMatrix::checked(i64 a, i64 b, i64 c, i64 d)
{
    ModularMatrix m{a, b, c, d};
    if (m.det() != 1)
        throw DomainError("matrix " + m.str() + " does not have determinant 1");
    return m;
}

ModularMatrix ModularMatrix::operator*(const ModularMatrix& o) const
{
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

cplx ModularMatrix::apply(cplx z) const { return RealMatrix(*this).apply(z); }

std::string ModularMatrix::str() const
{
    std::ostringstream os;
    os << "(" << a << "," << b << ";" << c << "," << d << ")";
    return os.str();
}

RealMatrix RealMatrix::operator*(const RealMatrix& o) const
{
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

cplx RealMatrix::apply(cplx z) const { return (a * z + b) / (c * z + d); }

RealMatrix fricke(double q)
{
    double s = std::sqrt(q);
    return {0.0, -1.0 / s, s, 0.0};
}

std::string Cusp::label() const
{
    if (is_infinity())
        return "inf";
    if (p == 0)
        return "0";
    return std::to_string(p) + "/" + std::to_string(q);
}

i64 cusp_count(i64 level)
{
    i64 n = 0;
    for (i64 d : arith::divisors(level))
        n += arith::euler_phi(arith::gcd(d, level / d));
    return n;
}

namespace {

ModularMatrix base_matrix(const Cusp& c)
{
    if (c.is_infinity())
        return {1, 0, 0, 1};
    if (c.p == 0)
        return {0, -1, 1, 0};
    i64 x, y;
    arith::ext_gcd(c.p, c.q, x, y);
    // p x + q y = 1, so (p, -y; q, x) has determinant 1.
    return ModularMatrix::checked(c.p, -y, c.q, x);
}

i64 find_width(const Cusp& c, i64 level)
{
    if (c.is_infinity())
        return 1;
    i64 q2 = c.q * c.q;
    for (i64 h = 1;; ++h)
        if ((q2 * h) % level == 0)
            return h;
}

bool is_singular(const ScalingMatrix& s, i64 level, WeightClass l)
{
    automorphy::MultiplierSystem nu(level, l);
    cplx v = nu(s.stabilizer) * automorphy::r_closed(s.matrix.inverse(), RealMatrix(s.stabilizer), weight_value(l));
    return std::abs(v - 1.0) < 1e-9;
}

std::vector<Cusp> enumerate(i64 level, WeightClass l)
{
    std::vector<Cusp> out;
    out.push_back(Cusp{1, 0, 0, false, 1});
    for (i64 q : arith::divisors(level)) {
        if (q == 1 || q == level)
            continue;
        i64 g = arith::gcd(q, level / q);
        for (i64 r = 0; r < g || (g == 1 && r == 0); ++r) {
            if (g > 1 && arith::gcd(r, g) != 1)
                continue;
            i64 p = r;
            while (arith::gcd(p, q) != 1)
                p += g;
            out.push_back(Cusp{p, q, 0, false, 1});
            if (g == 1)
                break;
        }
    }
    out.push_back(Cusp{0, 1, 0, false, 1});
    std::stable_sort(out.begin() + 1, out.end() - 1,
                     [](const Cusp& x, const Cusp& y) { return std::pair(x.q, x.p) < std::pair(y.q, y.p); });
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].index = static_cast<int>(k) + 1;
        out[k].width = find_width(out[k], level);
        out[k].singular = is_singular(scaling_matrix(out[k], level), level, l);
    }
    return out;
}

}  // namespace

const std::vector<Cusp>& cusps(i64 level, WeightClass l)
{
    if (level <= 0 || level % 4 != 0)
        throw DomainError("level must be a positive multiple of 4");
    static std::mutex mu;
    static std::map<std::pair<i64, int>, std::vector<Cusp>> cache;
    std::lock_guard lock(mu);
    auto key = std::pair(level, static_cast<int>(l));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, enumerate(level, l)).first;
    return it->second;
}

ScalingMatrix scaling_matrix(const Cusp& cusp, i64 level)
{
    ScalingMatrix s;
    s.cusp = cusp;
    s.base = base_matrix(cusp);
    i64 h = find_width(cusp, level);
    s.cusp.width = h;
    double rh = std::sqrt(static_cast<double>(h));
    s.matrix = RealMatrix(s.base) * RealMatrix(rh, 0.0, 0.0, 1.0 / rh);
    s.stabilizer = s.base * ModularMatrix{1, h, 0, 1} * s.base.inverse();
    if (!s.stabilizer.in_gamma0(level))
        throw DomainError("cusp " + cusp.label() + " is not a cusp representative for this level");
    return s;
}

std::pair<i64, i64> coset_key(const ScalingMatrix& s, const ModularMatrix& gamma)
{
    ModularMatrix m = s.base.inverse() * gamma;
    i64 C = m.c, D = m.d;
    if (C < 0 || (C == 0 && D < 0)) {
        C = -C;
        D = -D;
    }
    if (C == 0)
        return {0, 1};
    return {C, arith::mod(D, C)};
}

std::vector<ModularMatrix> coset_reps(i64 level, const Cusp& cusp, double c_max)
{
    ScalingMatrix s = scaling_matrix(cusp, level);
    const ModularMatrix& A = s.base;
    std::vector<ModularMatrix> out;
    if (cusp.is_infinity())
        out.push_back(ModularMatrix{});
    const double rh = std::sqrt(static_cast<double>(s.cusp.width));
    for (i64 C = 1; rh * C <= c_max + 1e-9; ++C) {
        for (i64 D = 0; D < C || (C == 1 && D == 0); ++D) {
            if (arith::gcd(C, D) != 1)
                continue;
            i64 x, y;
            arith::ext_gcd(D, C, x, y);
            // x D + y C = 1
            ModularMatrix m0{x, -y, C, D};
            for (i64 k = 0; k < level; ++k) {
                ModularMatrix m{m0.a + k * C, m0.b + k * D, C, D};
                ModularMatrix g = A * m;
                if (g.in_gamma0(level)) {
                    out.push_back(g);
                    break;
                }
            }
            if (C == 1)
                break;
        }
    }
    return out;
}

std::vector<ModularMatrix> generators(i64 level, i64 height)
{
    std::vector<ModularMatrix> out{ModularMatrix::T()};
    for (i64 D = 1; D <= height; D += 2) {
        if (arith::gcd(D, level) != 1)
            continue;
        i64 r_hi = D == 1 ? 1 : D - 1;
        for (i64 r = 1; r <= r_hi; ++r) {
            if (arith::gcd(r, D) != 1)
                continue;
            i64 c = level * r;
            i64 x, y;
            arith::ext_gcd(D, c, x, y);
            i64 t = arith::mod(x, c);
            if (2 * t > c)
                t -= c;
            i64 m = (D * t - 1) / c;
            ModularMatrix g = ModularMatrix::checked(t, m, c, D);
            if (std::find(out.begin(), out.end(), g) == out.end())
                out.push_back(g);
        }
    }
    return out;
}

nlohmann::json to_json(const std::vector<Cusp>& cs)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs) {
        nlohmann::json j;
        if (c.is_infinity()) {
            j["p"] = 1;
            j["q"] = 0;
        } else {
            j["p"] = c.p;
            j["q"] = c.q;
        }
        j["label"] = c.label();
        j["index"] = c.index;
        j["singular"] = c.singular;
        j["width"] = c.width;
        arr.push_back(j);
    }
    return arr;
}

ModularMatrix random_matrix(std::mt19937_64& rng, i64 bound, i64 level)
{
    if (bound < 1 || (level > 0 && level > bound))
        throw DomainError("random_matrix: bound too small");
    std::uniform_int_distribution<i64> U(-bound, bound);
    for (;;) {
        i64 c = U(rng), d = U(rng);
        if (level > 0) {
            c = level * (c / level);
            if (c == 0)
                continue;
        }
        if (arith::gcd(c, d) != 1)
            continue;
        i64 x, y;
        arith::ext_gcd(d, c, x, y);
        // d x + c y = 1, so (x, -y; c, d) has determinant 1.
        i64 a = x, b = -y;
        if (c != 0 && d != 0) {
            i64 lo = -bound, hi = bound;
            // shifts a + k c, b + k d keeping both within the bound
            std::vector<i64> ks;
            for (i64 k = -2 * bound; k <= 2 * bound; ++k) {
                i64 ak = a + k * c, bk = b + k * d;
                if (ak >= lo && ak <= hi && bk >= lo && bk <= hi)
                    ks.push_back(k);
            }
            if (ks.empty())
                continue;
            i64 k = ks[std::uniform_int_distribution<std::size_t>(0, ks.size() - 1)(rng)];
            a += k * c;
            b += k * d;
        } else if (std::abs(a) > bound || std::abs(b) > bound) {
            continue;
        }
        return ModularMatrix::checked(a, b, c, d);
    }
}

}  // namespace heis::modgroup
