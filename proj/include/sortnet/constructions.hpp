// Depth-3 and depth-4 network builders. The depth-3 network sorts two
// interleaved rows, then two diagonal sets, then columns of height 2;
// its arity is ceil(n/2) for n >= 4. The depth-4 network realizes the
// four column-sorting passes of ColumnSort over an r x s matrix held in
// column-major cell order. Odd sizes and matrix padding are handled by
// projecting out virtual maximal inputs.

#ifndef SORTNET_CONSTRUCTIONS_HPP
#define SORTNET_CONSTRUCTIONS_HPP

#include <vector>

#include "sortnet/core.hpp"

namespace sortnet {

class DomainError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

class ProjectionError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

struct ColumnSortShape {
    long r = 0;   // rows; arity of the column sorts
    long s = 0;   // columns
    long pad = 0; // r*s - n virtual cells
};

Network build_depth3(int n);

// s is the largest value with 2(s-1)^2 <= ceil(n/s); r = max(ceil(n/s), 2(s-1)^2).
ColumnSortShape columnsort_shape(long n);

Network build_columnsort4(int n);

// Removes cells that would carry a value larger than every real input.
// The virtual positions must stay the top cells of their comparators in
// every layer (true for both constructions, where they occupy the tail
// of the index space); otherwise a ProjectionError is raised.
Network project_virtual_max(const Network& net, const std::vector<int>& virtual_inputs);

}  // namespace sortnet

#endif
