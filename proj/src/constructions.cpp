#include "sortnet/constructions.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace sortnet {

Network build_depth3(int n) {
    if (n < 2)
        throw DomainError("build_depth3 needs n >= 2");
    if (n % 2 != 0) {
        Network padded = build_depth3(n + 1);
        return project_virtual_max(padded, {n + 1});
    }
    // Cells form an (n/2) x 2 table, cell of entry (i,j) is 2(i-1)+j.
    Layer rows;
    Comparator row1, row2;
    for (int i = 1; i <= n / 2; ++i) {
        row1.members.push_back(2 * (i - 1) + 1);
        row2.members.push_back(2 * (i - 1) + 2);
    }
    rows.comparators = {row1, row2};

    Layer diagonals;
    Comparator t0, t1;
    for (int i = 1; i <= n / 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            int cell = 2 * (i - 1) + j;
            ((i + j) % 2 == 0 ? t0 : t1).members.push_back(cell);
        }
    }
    diagonals.comparators = {t0, t1};

    Layer columns;
    for (int i = 1; i <= n / 2; ++i)
        columns.comparators.push_back(Comparator{{2 * i - 1, 2 * i}});

    return Network(n, {rows, diagonals, columns});
}

ColumnSortShape columnsort_shape(long n) {
    if (n < 4)
        throw DomainError("columnsort_shape needs n >= 4");
    long best_s = 1;
    for (long s = 2; 2 * (s - 1) * (s - 1) <= n; ++s) {
        long rows_needed = (n + s - 1) / s;
        if (2 * (s - 1) * (s - 1) <= rows_needed)
            best_s = s;
    }
    ColumnSortShape shape;
    shape.s = best_s;
    shape.r = std::max((n + best_s - 1) / best_s, 2 * (best_s - 1) * (best_s - 1));
    shape.pad = shape.r * shape.s - n;
    return shape;
}

Network build_columnsort4(int n) {
    if (n < 4)
        throw DomainError("build_columnsort4 needs n >= 4");
    ColumnSortShape shape = columnsort_shape(n);
    const int r = static_cast<int>(shape.r);
    const int s = static_cast<int>(shape.s);
    const int total = r * s;

    std::vector<Layer> layers;
    if (s == 1) {
        Layer whole;
        Comparator all;
        for (int p = 1; p <= total; ++p)
            all.members.push_back(p);
        whole.comparators = {all};
        Layer singletons;
        for (int p = 1; p <= total; ++p)
            singletons.comparators.push_back(Comparator{{p}});
        layers = {whole, singletons, singletons, singletons};
    } else {
        // Column-major layout: cell p sits in row ((p-1) mod r)+1 of
        // column ceil(p/r). The reshape permutation sends that cell to
        // the position whose column-major rank equals its row-major rank.
        auto reshape = [&](int p) {
            int row = (p - 1) % r + 1;
            int col = (p - 1) / r + 1;
            return (row - 1) * s + col;
        };
        Layer cols;
        Layer reshaped;
        for (int j = 1; j <= s; ++j) {
            Comparator column, image;
            for (int i = 1; i <= r; ++i) {
                int p = (j - 1) * r + i;
                column.members.push_back(p);
                image.members.push_back(reshape(p));
            }
            cols.comparators.push_back(column);
            reshaped.comparators.push_back(image);
        }
        // Half-shifted windows merge adjacent sorted columns.
        Layer windows;
        const int half = r / 2;
        Comparator head;
        for (int p = 1; p <= half; ++p)
            head.members.push_back(p);
        windows.comparators.push_back(head);
        for (int start = half + 1; start <= total; start += r) {
            Comparator block;
            for (int p = start; p <= std::min(start + r - 1, total); ++p)
                block.members.push_back(p);
            windows.comparators.push_back(block);
        }
        layers = {cols, reshaped, cols, windows};
    }

    Network padded(total, std::move(layers));
    if (shape.pad == 0)
        return padded;
    std::vector<int> virtual_inputs;
    for (int p = n + 1; p <= total; ++p)
        virtual_inputs.push_back(p);
    return project_virtual_max(padded, virtual_inputs);
}

Network project_virtual_max(const Network& net, const std::vector<int>& virtual_inputs) {
    if (virtual_inputs.empty())
        return net;
    const int n = net.inputs();
    std::set<int> mask(virtual_inputs.begin(), virtual_inputs.end());
    for (int v : mask)
        if (v < 1 || v > n)
            throw ProjectionError("virtual input " + std::to_string(v) + " out of range");
    if (static_cast<int>(mask.size()) >= n)
        throw ProjectionError("cannot project away every cell");

    // Per-array masks: a comparator with v marked inputs marks its v
    // highest cells in the next array. The projected object is a plain
    // network only when the marks never move, which we verify.
    std::vector<std::set<int>> masks{mask};
    for (const Layer& layer : net.layers()) {
        const std::set<int>& prev = masks.back();
        std::set<int> next;
        for (const Comparator& comp : layer.comparators) {
            size_t marked = 0;
            for (int m : comp.members)
                marked += prev.count(m);
            for (size_t i = comp.members.size() - marked; i < comp.members.size(); ++i)
                next.insert(comp.members[i]);
        }
        masks.push_back(std::move(next));
    }

    const std::set<int>& final_mask = masks.back();
    for (int p = n - static_cast<int>(mask.size()) + 1; p <= n; ++p)
        if (!final_mask.count(p))
            throw ProjectionError("virtual cells do not end in the top " +
                                  std::to_string(mask.size()) + " output positions");
    for (size_t a = 1; a < masks.size(); ++a)
        if (masks[a] != mask)
            throw ProjectionError("virtual cells move between arrays; projection unsupported");

    std::vector<int> renumber(static_cast<size_t>(n) + 1, 0);
    int next_index = 0;
    for (int p = 1; p <= n; ++p)
        renumber[static_cast<size_t>(p)] = mask.count(p) ? 0 : ++next_index;

    std::vector<Layer> layers;
    for (const Layer& layer : net.layers()) {
        Layer projected;
        for (const Comparator& comp : layer.comparators) {
            Comparator kept;
            for (int m : comp.members)
                if (int idx = renumber[static_cast<size_t>(m)]; idx != 0)
                    kept.members.push_back(idx);
            if (!kept.members.empty())
                projected.comparators.push_back(std::move(kept));
        }
        layers.push_back(std::move(projected));
    }
    return Network(n - static_cast<int>(mask.size()), std::move(layers));
}

}  // namespace sortnet
