#include "heis/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

namespace heis::arith {

i64 gcd(i64 a, i64 b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 mod(i64 a, i64 n)
{
    i64 r = a % n;
    return r < 0 ? r + n : r;
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

std::vector<std::pair<i64, int>> factorize(i64 n)
{
    std::vector<std::pair<i64, int>> f;
    if (n < 0)
        n = -n;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

std::vector<i64> divisors(i64 n)
{
    std::vector<i64> d;
    for (i64 k = 1; k * k <= n; ++k) {
        if (n % k == 0) {
            d.push_back(k);
            if (k * k != n)
                d.push_back(n / k);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

i64 euler_phi(i64 n)
{
    i64 r = n;
    for (auto [p, e] : factorize(n))
        r = r / p * (p - 1);
    return r;
}

int kronecker(i64 a, i64 n)
{
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            result = -result;
    }
    while (n % 2 == 0) {
        if (a % 2 == 0)
            return 0;
        n /= 2;
        i64 r8 = mod(a, 8);
        if (r8 == 3 || r8 == 5)
            result = -result;
    }
    // Jacobi symbol for odd positive n.
    a = mod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r8 = n % 8;
            if (r8 == 3 || r8 == 5)
                result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

Turn Turn::make(i64 num, i64 den)
{
    if (den <= 0)
        throw DomainError("turn denominator must be positive");
    num = mod(num, den);
    i64 g = gcd(num, den);
    if (g == 0)
        g = den;
    return {num / g, den / g};
}

Turn Turn::operator+(Turn o) const
{
    i64 l = den / gcd(den, o.den) * o.den;
    return make(num * (l / den) + o.num * (l / o.den), l);
}

Turn Turn::operator-() const { return make(-num, den); }

cplx Turn::value() const
{
    // Exact values on the real and imaginary axes; otherwise one rounding.
    if (num == 0)
        return {1.0, 0.0};
    if (2 * num == den)
        return {-1.0, 0.0};
    if (4 * num == den)
        return {0.0, 1.0};
    if (4 * num == 3 * den)
        return {0.0, -1.0};
    i64 n = num;
    if (2 * n > den)
        n -= den;
    long double ang = 2.0L * 3.14159265358979323846264338327950288L * n / den;
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

namespace {

i64 compute_conductor(i64 D, const std::vector<std::optional<Turn>>& table)
{
    for (i64 f : divisors(D)) {
        bool ok = true;
        for (i64 m = 1; m < D && ok; m += f) {
            if (table[m] && table[m]->num != 0)
                ok = false;
        }
        if (ok)
            return f;
    }
    return D;
}

i64 powmod(i64 b, i64 e, i64 m)
{
    i64 r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1)
            r = static_cast<i64>((__int128)r * b % m);
        b = static_cast<i64>((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

i64 primitive_root_prime_power(i64 p, int e)
{
    i64 pe = 1;
    for (int k = 0; k < e; ++k)
        pe *= p;
    i64 ph = pe / p * (p - 1);
    auto fac = factorize(ph);
    for (i64 g = 2; g < pe; ++g) {
        if (g % p == 0)
            continue;
        bool prim = true;
        for (auto [q, k] : fac) {
            if (powmod(g, ph / q, pe) == 1) {
                prim = false;
                break;
            }
        }
        if (prim)
            return g;
    }
    return 1;
}

// Lift g mod pe to a residue mod D that is 1 modulo the complementary part.
i64 crt_lift(i64 g, i64 pe, i64 D)
{
    i64 rest = D / pe;
    i64 x, y;
    ext_gcd(pe, rest, x, y);
    // pe*x + rest*y = 1
    __int128 v = (__int128)g * rest % D * mod(y, D) % D + (__int128)1 * pe % D * mod(x, D) % D;
    return mod(static_cast<i64>(v % D), D);
}

}  // namespace

DirichletCharacter::DirichletCharacter(i64 modulus, std::vector<std::optional<Turn>> table)
    : modulus_(modulus), table_(std::move(table))
{
    if (modulus_ < 1)
        throw DomainError("character modulus must be positive");
    if (static_cast<i64>(table_.size()) != modulus_)
        throw DomainError("character table size must equal the modulus");
    for (i64 r = 0; r < modulus_; ++r) {
        bool unit = gcd(r, modulus_) == 1;
        if (unit != table_[r].has_value())
            throw DomainError("character table must be defined exactly on units");
    }
    conductor_ = compute_conductor(modulus_, table_);
}

DirichletCharacter DirichletCharacter::principal(i64 modulus)
{
    std::vector<std::optional<Turn>> t(modulus);
    for (i64 r = 0; r < modulus; ++r)
        if (gcd(r, modulus) == 1)
            t[r] = Turn{};
    return DirichletCharacter(modulus, std::move(t));
}

bool DirichletCharacter::is_principal() const
{
    return std::all_of(table_.begin(), table_.end(), [](const auto& v) { return !v || v->num == 0; });
}

i64 DirichletCharacter::order() const
{
    i64 o = 1;
    for (const auto& v : table_)
        if (v)
            o = o / gcd(o, v->den) * v->den;
    return o;
}

std::optional<Turn> DirichletCharacter::turn(i64 m) const { return table_[mod(m, modulus_)]; }

cplx DirichletCharacter::operator()(i64 m) const
{
    auto t = turn(m);
    return t ? t->value() : cplx{0.0, 0.0};
}

DirichletCharacter DirichletCharacter::conj() const
{
    auto t = table_;
    for (auto& v : t)
        if (v)
            v = -*v;
    return DirichletCharacter(modulus_, std::move(t));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const
{
    if (o.modulus_ != modulus_)
        throw DomainError("character product needs equal moduli");
    auto t = table_;
    for (i64 r = 0; r < modulus_; ++r)
        if (t[r])
            t[r] = *t[r] + *o.table_[r];
    return DirichletCharacter(modulus_, std::move(t));
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const
{
    return modulus_ == o.modulus_ && table_ == o.table_;
}

std::vector<DirichletCharacter> enumerate_characters(i64 D)
{
    if (D < 1)
        throw DomainError("modulus must be positive");
    if (D == 1)
        return {DirichletCharacter::principal(1)};

    // Generators of (Z/D)^x with their orders, one or two per prime power.
    std::vector<std::pair<i64, i64>> gens;
    for (auto [p, e] : factorize(D)) {
        i64 pe = 1;
        for (int k = 0; k < e; ++k)
            pe *= p;
        if (p == 2) {
            if (e >= 2)
                gens.emplace_back(crt_lift(pe - 1, pe, D), 2);
            if (e >= 3)
                gens.emplace_back(crt_lift(5, pe, D), pe / 4);
        } else {
            gens.emplace_back(crt_lift(primitive_root_prime_power(p, e), pe, D), pe / p * (p - 1));
        }
    }

    // Discrete logs of every unit with respect to the generator list.
    std::vector<std::vector<i64>> logs(D);
    std::vector<i64> exps(gens.size(), 0);
    while (true) {
        i64 m = 1;
        for (std::size_t i = 0; i < gens.size(); ++i)
            m = static_cast<i64>((__int128)m * powmod(gens[i].first, exps[i], D) % D);
        logs[m] = exps;
        std::size_t i = 0;
        while (i < gens.size() && ++exps[i] == gens[i].second)
            exps[i++] = 0;
        if (i == gens.size())
            break;
    }

    std::vector<DirichletCharacter> out;
    std::vector<i64> idx(gens.size(), 0);
    while (true) {
        std::vector<std::optional<Turn>> t(D);
        for (i64 r = 0; r < D; ++r) {
            if (gcd(r, D) != 1)
                continue;
            Turn v{};
            for (std::size_t i = 0; i < gens.size(); ++i)
                v = v + Turn::make(idx[i] * logs[r][i], gens[i].second);
            t[r] = v;
        }
        out.emplace_back(D, std::move(t));
        std::size_t i = 0;
        while (i < gens.size() && ++idx[i] == gens[i].second)
            idx[i++] = 0;
        if (i == gens.size())
            break;
    }
    return out;
}

cplx gauss_sum(const DirichletCharacter& chi, i64 n)
{
    const i64 D = chi.modulus();
    long double re = 0, im = 0;
    for (i64 m = 0; m < D; ++m) {
        auto t = chi.turn(m);
        if (!t)
            continue;
        cplx v = (*t + Turn::make(static_cast<i64>((__int128)m * mod(n, D) % D), D)).value();
        re += v.real();
        im += v.imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

cplx epsilon_factor(i64 D, WeightClass l)
{
    if (D <= 0 || D % 2 == 0)
        throw DomainError("epsilon factor needs a positive odd modulus");
    if (D % 4 == 1)
        return {1.0, 0.0};
    return l == WeightClass::Half ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
}

DirichletCharacter dual_character(const DirichletCharacter& chi)
{
    const i64 D = chi.modulus();
    if (D % 2 == 0)
        throw DomainError("dual character needs an odd modulus");
    auto t = chi.conj().table();
    for (i64 r = 0; r < D; ++r)
        if (t[r] && kronecker(r, D) == -1)
            t[r] = *t[r] + Turn{1, 2};
    return DirichletCharacter(D, std::move(t));
}

nlohmann::json to_json(const DirichletCharacter& chi)
{
    nlohmann::json vals = nlohmann::json::array();
    for (i64 r = 0; r < chi.modulus(); ++r)
        if (auto t = chi.turn(r))
            vals.push_back({r, t->num, t->den});
    return {{"modulus", chi.modulus()}, {"values", vals}};
}

DirichletCharacter character_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("modulus") || !j.contains("values"))
        throw SchemaError("character: expected object with fields modulus, values");
    i64 D = j.at("modulus").get<i64>();
    if (D < 1)
        throw SchemaError("character.modulus: must be positive");
    std::vector<std::optional<Turn>> t(D);
    for (const auto& row : j.at("values")) {
        if (!row.is_array() || row.size() != 3)
            throw SchemaError("character.values: rows must be [residue, num, den]");
        i64 r = row[0].get<i64>();
        if (r < 0 || r >= D)
            throw SchemaError("character.values: residue out of range");
        t[r] = Turn::make(row[1].get<i64>(), row[2].get<i64>());
    }
    try {
        return DirichletCharacter(D, std::move(t));
    } catch (const DomainError& e) {
        throw SchemaError(std::string("character.values: ") + e.what());
    }
}

}  // namespace heis::arith
