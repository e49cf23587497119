#include "sortnet/access.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sortnet {

BranchError::BranchError(size_t step_, const std::string& what)
    : NetworkError("branch step " + std::to_string(step_) + ": " + what), step(step_) {}

CertificateError::CertificateError(size_t step_, const std::string& what)
    : NetworkError("branch input " + std::to_string(step_) + ": " + what), step(step_) {}

AccessSet access_set(const Network& net, const std::vector<Bit>& input, int array) {
    if (array < 0 || array > net.depth())
        throw NetworkError("array index out of range");
    AccessSet result;
    result.input = input;
    result.array = array;
    const std::vector<Bit> base = bool_trace(net, input)[static_cast<size_t>(array)];
    std::vector<char> accessible(base.size(), 0);
    for (size_t i = 0; i < input.size(); ++i) {
        if (input[i] != 0)
            continue;
        std::vector<Bit> flipped = input;
        flipped[i] = 1;
        const std::vector<Bit> after = bool_trace(net, flipped)[static_cast<size_t>(array)];
        for (size_t b = 0; b < base.size(); ++b)
            if (base[b] == 0 && after[b] == 1)
                accessible[b] = 1;
    }
    for (size_t b = 0; b < accessible.size(); ++b)
        if (accessible[b])
            result.cells.push_back(static_cast<int>(b) + 1);
    return result;
}

GrowingBranch validate_branch(const std::vector<std::vector<Bit>>& inputs) {
    if (inputs.empty())
        throw BranchError(0, "branch must contain at least one input");
    for (size_t i = 1; i < inputs.size(); ++i) {
        if (inputs[i].size() != inputs[0].size())
            throw BranchError(i, "input length differs from the first input");
        int flips_up = 0;
        for (size_t b = 0; b < inputs[i].size(); ++b) {
            if (inputs[i - 1][b] == 1 && inputs[i][b] == 0)
                throw BranchError(i, "bit " + std::to_string(b + 1) + " changed from 1 to 0");
            flips_up += inputs[i - 1][b] == 0 && inputs[i][b] == 1;
        }
        if (flips_up != 1)
            throw BranchError(i, "expected exactly one 0->1 flip, found " + std::to_string(flips_up));
    }
    return GrowingBranch{inputs};
}

ArityCertificate certify_last_layer_arity(const Network& net, const GrowingBranch& branch) {
    const int d = net.depth();
    std::set<int> union_cells;
    for (size_t i = 0; i < branch.inputs.size(); ++i) {
        if (static_cast<int>(branch.inputs[i].size()) != net.inputs())
            throw CertificateError(i, "input length does not match the network");
        AccessSet access = access_set(net, branch.inputs[i], d - 1);
        if (access.cells.size() < 2)
            throw CertificateError(i, "fewer than 2 accessible cells before the last layer");
        union_cells.insert(access.cells.begin(), access.cells.end());
    }
    const int bound = static_cast<int>(branch.inputs.size()) + 1;

    // Cross-checks of the certified conclusion; a failure here cannot be
    // blamed on the branch, so it is reported as an internal bug.
    if (static_cast<int>(union_cells.size()) < bound)
        throw InternalInconsistencyError("union of access sets smaller than the certified bound");
    for (const Comparator& comp : net.layer(d).comparators) {
        bool any = false, all = true;
        for (int c : union_cells) {
            bool inside = std::binary_search(comp.members.begin(), comp.members.end(), c);
            any = any || inside;
            all = all && inside;
        }
        if (any && !all)
            throw InternalInconsistencyError("accessed cells split across last-layer comparators");
    }

    ArityCertificate cert;
    cert.branch = branch;
    cert.certified_bound = bound;
    cert.layer = d;
    return cert;
}

long connectivity_bound(long n, int d) {
    if (n < 1 || d < 1)
        throw NetworkError("connectivity_bound needs n >= 1 and d >= 1");
    const int exponent = (d + 1) / 2;
    auto reaches = [&](long k) {
        // 2 * k^exponent >= n, with saturation instead of overflow.
        unsigned long long acc = 2;
        for (int e = 0; e < exponent; ++e) {
            if (acc > static_cast<unsigned long long>(n))
                return true;
            acc *= static_cast<unsigned long long>(k);
        }
        return acc >= static_cast<unsigned long long>(n);
    };
    long k = 1;
    while (!reaches(k))
        ++k;
    return k;
}

GrowingBranch find_branch_depth2(const Network& net) {
    if (net.depth() != 2)
        throw StrategyError("depth-2 strategy needs a depth-2 network");
    const Layer& first = net.layer(1);
    if (first.comparators.size() < 2)
        throw StrategyError("first layer has a single comparator; strategy inapplicable");
    const int n = net.inputs();
    // Keep the smallest member of the first two comparators untouched.
    const int keep_a = first.comparators[0].members.front();
    const int keep_b = first.comparators[1].members.front();
    GrowingBranch branch;
    std::vector<Bit> current(static_cast<size_t>(n), 0);
    branch.inputs.push_back(current);
    for (int pos = 1; pos <= n; ++pos) {
        if (pos == keep_a || pos == keep_b)
            continue;
        current[static_cast<size_t>(pos) - 1] = 1;
        branch.inputs.push_back(current);
    }
    return branch;
}

std::string serialize_certificate(const ArityCertificate& cert) {
    std::ostringstream out;
    out << "aritycert v1\n";
    out << "n " << cert.branch.inputs.front().size() << "\n";
    out << "layer " << cert.layer << "\n";
    out << "bound " << cert.certified_bound << "\n";
    out << "base ";
    for (Bit b : cert.branch.inputs.front())
        out << int(b);
    out << "\n";
    for (size_t i = 1; i < cert.branch.inputs.size(); ++i) {
        for (size_t p = 0; p < cert.branch.inputs[i].size(); ++p)
            if (cert.branch.inputs[i][p] != cert.branch.inputs[i - 1][p])
                out << "flip " << p + 1 << "\n";
    }
    return out.str();
}

}  // namespace sortnet
