// Access sets, growing branches and the last-layer arity certifier.
// A cell is accessible on a Boolean input when it holds 0 but a single
// 0->1 input flip turns it into 1. A growing branch whose every input
// keeps two accessible cells before the last layer certifies a lower
// bound on the arity of some last-layer comparator.

#ifndef SORTNET_ACCESS_HPP
#define SORTNET_ACCESS_HPP

#include <string>
#include <vector>

#include "sortnet/core.hpp"

namespace sortnet {

struct CellRef {
    int array = 0;  // 0..d
    int pos = 0;    // 1..n

    bool operator==(const CellRef&) const = default;
};

struct AccessSet {
    std::vector<Bit> input;
    int array = 0;
    std::vector<int> cells;  // positions, ascending
};

class BranchError : public NetworkError {
public:
    BranchError(size_t step_, const std::string& what);
    size_t step;  // index of the first offending input
};

struct GrowingBranch {
    // inputs[i+1] differs from inputs[i] in exactly one position, 0->1.
    std::vector<std::vector<Bit>> inputs;

    size_t length() const { return inputs.size(); }
};

struct ArityCertificate {
    GrowingBranch branch;
    int certified_bound = 0;
    int layer = 0;  // the last layer index d
};

class CertificateError : public NetworkError {
public:
    CertificateError(size_t step_, const std::string& what);
    size_t step;
};

// Raised only when the certified branch contradicts the certifier's
// theoretical cross-checks, which indicates an implementation bug.
class InternalInconsistencyError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

AccessSet access_set(const Network& net, const std::vector<Bit>& input, int array);

GrowingBranch validate_branch(const std::vector<std::vector<Bit>>& inputs);

ArityCertificate certify_last_layer_arity(const Network& net, const GrowingBranch& branch);

// Smallest integer k with 2 * k^ceil(d/2) >= n, in exact arithmetic.
long connectivity_bound(long n, int d);

// For a depth-2 network whose first layer has >= 2 comparators: the
// length-(n-1) branch from all-zeros that keeps one untouched cell in
// each of two first-layer comparators.
GrowingBranch find_branch_depth2(const Network& net);

class StrategyError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

std::string serialize_certificate(const ArityCertificate& cert);

}  // namespace sortnet

#endif
