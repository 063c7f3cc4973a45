#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "heis/types.hpp"

namespace heis::arith {

i64 gcd(i64 a, i64 b);
i64 mod(i64 a, i64 n);  // representative in [0, n)
i64 euler_phi(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> divisors(i64 n);
// Solves a*x + b*y = g = gcd(a, b).
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);

// Kronecker symbol (a/n), with (a/-1) = sign(a) and (a/0) = [|a| = 1].
int kronecker(i64 a, i64 n);

// A root of unity exp(2 pi i num/den), kept reduced with 0 <= num < den.
struct Turn {
    i64 num = 0;
    i64 den = 1;

    static Turn make(i64 num, i64 den);
    Turn operator+(Turn o) const;
    Turn operator-() const;
    bool operator==(const Turn&) const = default;
    cplx value() const;
};

class DirichletCharacter {
public:
    // table[r] is the value at residue r, empty when gcd(r, D) > 1.
    DirichletCharacter(i64 modulus, std::vector<std::optional<Turn>> table);

    static DirichletCharacter principal(i64 modulus);

    i64 modulus() const { return modulus_; }
    bool is_principal() const;
    i64 conductor() const { return conductor_; }
    bool is_primitive() const { return conductor_ == modulus_; }
    // Order of chi in the character group.
    i64 order() const;

    std::optional<Turn> turn(i64 m) const;
    cplx operator()(i64 m) const;

    DirichletCharacter conj() const;
    DirichletCharacter operator*(const DirichletCharacter& o) const;
    bool operator==(const DirichletCharacter& o) const;

    const std::vector<std::optional<Turn>>& table() const { return table_; }

private:
    i64 modulus_;
    std::vector<std::optional<Turn>> table_;
    i64 conductor_ = 1;
};

// All phi(D) characters mod D, principal first.
std::vector<DirichletCharacter> enumerate_characters(i64 D);

// tau_n(chi) = sum over units m of chi(m) e(mn/D).
cplx gauss_sum(const DirichletCharacter& chi, i64 n);

cplx epsilon_factor(i64 D, WeightClass l);

// chi_check(r) = (r/D) conj(chi(r)); D odd.
DirichletCharacter dual_character(const DirichletCharacter& chi);

nlohmann::json to_json(const DirichletCharacter& chi);
DirichletCharacter character_from_json(const nlohmann::json& j);

}  // namespace heis::arith
