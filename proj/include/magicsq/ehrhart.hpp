#pragma once

#include <filesystem>
#include <map>

#include "magicsq/forms.hpp"

namespace magicsq {

// Cache of lattice-point counts E(N), keyed on disk by the system's content
// hash so stale entries can never be read back into a different system.
struct CountTable {
    int n = 0;
    std::string system_hash;
    std::map<long long, Int> counts;
    std::map<long long, std::string> provenance;

    void record(long long N, const Int& c, const std::string& prov);
    static CountTable load(const std::filesystem::path& dir, const FormSystem& sys);
    void save(const std::filesystem::path& dir) const;
};

// Exact number of lattice points in K(N) = { 0 <= psi_i <= N }, by depth-first
// search over the skeleton parameters with exact interval propagation.
Int count_points(const FormSystem& sys, long long N, int jobs = 1);

// Lattice points strictly inside K(N); equals count_points(N-2) for N >= 2 by
// the unit-point shift, and 0 for N in {0, 1}.
Int interior_count(const FormSystem& sys, long long N, int jobs = 1);

struct Quasipolynomial {
    int degree = 0;
    long long period = 1;
    std::vector<std::vector<Rational>> branches;  // [residue][k], constant term first

    Rational eval(long long N) const;
    Rational leading_coefficient() const;  // volume, when all branches agree
    nlohmann::json to_json() const;
    static Quasipolynomial from_json(const nlohmann::json& j);
};

// Interpolate the degree-d counting quasipolynomial for the given period
// (any multiple of the true period).  Abscissae per residue class are chosen
// to minimize counting cost, using reciprocity E(-N) = (-1)^d * interior(N)
// to get negative abscissae almost for free.  All counts go through `table`
// when provided; every cached direct count is cross-checked against the
// result before returning.
Quasipolynomial interpolate_quasipolynomial(const FormSystem& sys, long long period,
                                            CountTable* table = nullptr, int jobs = 1);

Rational volume(const Quasipolynomial& qp);

}  // namespace magicsq
