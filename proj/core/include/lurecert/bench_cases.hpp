#pragma once

#include <string>
#include <vector>

#include "lurecert/lti.hpp"

namespace lure::bench {

/// One benchmark plant with its published sector bound and the multiplier /
/// lifting sizes that reach it.
struct BenchmarkCase {
    int id;
    lti::TransferFunction g;
    double alpha_expected;
    int n_b, n_f;
    int ell;
    double tol;  // acceptance tolerance on alpha*
};

/// The seven benchmark plants.
const std::vector<BenchmarkCase>& table();

const BenchmarkCase& example(int id);

/// SHA-256 over the canonical serialization of all seven plants; guards the
/// embedded coefficients against drift.
std::string table_checksum();

}  // namespace lure::bench
