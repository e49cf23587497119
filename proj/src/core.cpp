#include "sortnet/core.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace sortnet {

ParseError::ParseError(int line_, int column_, const std::string& what)
    : NetworkError("line " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + what),
      line(line_),
      column(column_) {}

PartitionError::PartitionError(int layer_, int index_, const std::string& what)
    : NetworkError("layer " + std::to_string(layer_) + ": " + what), layer(layer_), index(index_) {}

Network::Network(int n, std::vector<Layer> layers) : n_(n), layers_(std::move(layers)) {
    if (n_ < 1)
        throw NetworkError("network needs at least one input");
    if (layers_.empty())
        throw NetworkError("network needs at least one layer");
    int layer_no = 0;
    for (Layer& layer : layers_) {
        ++layer_no;
        std::vector<char> seen(static_cast<size_t>(n_) + 1, 0);
        for (Comparator& comp : layer.comparators) {
            if (comp.members.empty())
                throw PartitionError(layer_no, 0, "empty comparator");
            std::sort(comp.members.begin(), comp.members.end());
            for (int m : comp.members) {
                if (m < 1 || m > n_)
                    throw PartitionError(layer_no, m, "cell " + std::to_string(m) + " out of range");
                if (seen[static_cast<size_t>(m)])
                    throw PartitionError(layer_no, m, "cell " + std::to_string(m) + " appears twice");
                seen[static_cast<size_t>(m)] = 1;
            }
        }
        for (int m = 1; m <= n_; ++m)
            if (!seen[static_cast<size_t>(m)])
                throw PartitionError(layer_no, m, "cell " + std::to_string(m) + " missing");
        std::sort(layer.comparators.begin(), layer.comparators.end(),
                  [](const Comparator& a, const Comparator& b) {
                      return a.members.front() < b.members.front();
                  });
    }
}

int Network::arity() const {
    int k = 0;
    for (const Layer& layer : layers_)
        for (const Comparator& comp : layer.comparators)
            k = std::max(k, comp.arity());
    return k;
}

std::vector<Value> evaluate(const Network& net, std::span<const Value> input) {
    if (static_cast<int>(input.size()) != net.inputs())
        throw NetworkError("input has " + std::to_string(input.size()) + " values, network expects " +
                           std::to_string(net.inputs()));
    std::vector<Value> cells(input.begin(), input.end());
    std::vector<Value> scratch;
    for (const Layer& layer : net.layers()) {
        for (const Comparator& comp : layer.comparators) {
            scratch.clear();
            for (int m : comp.members)
                scratch.push_back(cells[static_cast<size_t>(m) - 1]);
            std::sort(scratch.begin(), scratch.end());
            for (size_t i = 0; i < comp.members.size(); ++i)
                cells[static_cast<size_t>(comp.members[i]) - 1] = scratch[i];
        }
    }
    return cells;
}

Trace trace(const Network& net, std::span<const Value> input) {
    if (static_cast<int>(input.size()) != net.inputs())
        throw NetworkError("input has " + std::to_string(input.size()) + " values, network expects " +
                           std::to_string(net.inputs()));
    Trace t;
    t.arrays.emplace_back(input.begin(), input.end());
    std::vector<Value> scratch;
    for (const Layer& layer : net.layers()) {
        std::vector<Value> cells = t.arrays.back();
        for (const Comparator& comp : layer.comparators) {
            scratch.clear();
            for (int m : comp.members)
                scratch.push_back(cells[static_cast<size_t>(m) - 1]);
            std::sort(scratch.begin(), scratch.end());
            for (size_t i = 0; i < comp.members.size(); ++i)
                cells[static_cast<size_t>(comp.members[i]) - 1] = scratch[i];
        }
        t.arrays.push_back(std::move(cells));
    }
    return t;
}

Stats stats(const Network& net) {
    Stats s;
    s.n = net.inputs();
    s.depth = net.depth();
    for (const Layer& layer : net.layers()) {
        int k = 0;
        for (const Comparator& comp : layer.comparators)
            k = std::max(k, comp.arity());
        s.per_layer.push_back(k);
        s.arity = std::max(s.arity, k);
    }
    return s;
}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
};

// Splits input into meaningful lines, dropping blanks and # comments.
std::vector<std::pair<int, std::string>> logical_lines(std::string_view text) {
    std::vector<std::pair<int, std::string>> out;
    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view raw = text.substr(start, end - start);
        size_t a = raw.find_first_not_of(" \t\r");
        if (a != std::string_view::npos && raw[a] != '#') {
            size_t b = raw.find_last_not_of(" \t\r");
            out.emplace_back(line_no, std::string(raw.substr(a, b - a + 1)));
        }
        if (end == text.size())
            break;
        start = end + 1;
    }
    return out;
}

}  // namespace

Network parse_network(std::string_view text) {
    auto lines = logical_lines(text);
    if (lines.empty())
        throw ParseError(1, 1, "empty description");
    if (lines[0].second != "sortnet v1")
        throw ParseError(lines[0].first, 1, "expected header 'sortnet v1'");
    if (lines.size() < 2)
        throw ParseError(lines[0].first, 1, "missing 'n <integer>' line");
    int n = 0;
    {
        std::istringstream in(lines[1].second);
        std::string kw;
        in >> kw >> n;
        if (kw != "n" || in.fail() || n < 1)
            throw ParseError(lines[1].first, 1, "expected 'n <positive integer>'");
    }
    std::vector<Layer> layers;
    for (size_t li = 2; li < lines.size(); ++li) {
        const auto& [line_no, body] = lines[li];
        if (body.rfind("layer", 0) != 0)
            throw ParseError(line_no, 1, "expected 'layer {...} ...'");
        Layer layer;
        size_t p = 5;
        while (p < body.size()) {
            if (std::isspace(static_cast<unsigned char>(body[p]))) {
                ++p;
                continue;
            }
            if (body[p] != '{')
                throw ParseError(line_no, static_cast<int>(p) + 1, "expected '{'");
            size_t close = body.find('}', p);
            if (close == std::string::npos)
                throw ParseError(line_no, static_cast<int>(p) + 1, "unterminated comparator");
            Comparator comp;
            std::istringstream in(body.substr(p + 1, close - p - 1));
            int m;
            while (in >> m)
                comp.members.push_back(m);
            if (!in.eof())
                throw ParseError(line_no, static_cast<int>(p) + 1, "comparator members must be integers");
            if (comp.members.empty())
                throw ParseError(line_no, static_cast<int>(p) + 1, "empty comparator");
            layer.comparators.push_back(std::move(comp));
            p = close + 1;
        }
        if (layer.comparators.empty())
            throw ParseError(line_no, 1, "layer without comparators");
        layers.push_back(std::move(layer));
    }
    if (layers.empty())
        throw ParseError(lines.back().first, 1, "network needs at least one layer");
    return Network(n, std::move(layers));
}

std::string serialize(const Network& net) {
    std::ostringstream out;
    out << "sortnet v1\n";
    out << "n " << net.inputs() << "\n";
    for (const Layer& layer : net.layers()) {
        out << "layer";
        for (const Comparator& comp : layer.comparators) {
            out << " {";
            for (size_t i = 0; i < comp.members.size(); ++i)
                out << (i ? " " : "") << comp.members[i];
            out << "}";
        }
        out << "\n";
    }
    return out.str();
}

void bool_step(const Layer& layer, std::vector<Bit>& cells, std::vector<Bit>& scratch) {
    scratch = cells;
    for (const Comparator& comp : layer.comparators) {
        size_t zeros = 0;
        for (int m : comp.members)
            zeros += scratch[static_cast<size_t>(m) - 1] == 0;
        for (size_t i = 0; i < comp.members.size(); ++i)
            cells[static_cast<size_t>(comp.members[i]) - 1] = i < zeros ? 0 : 1;
    }
}

std::vector<Bit> bool_evaluate(const Network& net, std::vector<Bit> input) {
    if (static_cast<int>(input.size()) != net.inputs())
        throw NetworkError("input length mismatch");
    std::vector<Bit> scratch;
    for (const Layer& layer : net.layers())
        bool_step(layer, input, scratch);
    return input;
}

std::vector<std::vector<Bit>> bool_trace(const Network& net, std::vector<Bit> input) {
    if (static_cast<int>(input.size()) != net.inputs())
        throw NetworkError("input length mismatch");
    std::vector<std::vector<Bit>> arrays;
    arrays.push_back(input);
    std::vector<Bit> scratch;
    for (const Layer& layer : net.layers()) {
        bool_step(layer, input, scratch);
        arrays.push_back(input);
    }
    return arrays;
}

bool is_sorted_bits(const std::vector<Bit>& bits) {
    return std::is_sorted(bits.begin(), bits.end());
}

MaskEvaluator::MaskEvaluator(const Network& net) : n_(net.inputs()) {
    if (n_ > 32)
        throw NetworkError("mask evaluator supports at most 32 inputs");
    for (const Layer& layer : net.layers()) {
        std::vector<CompiledComparator> compiled;
        for (const Comparator& comp : layer.comparators) {
            CompiledComparator cc;
            cc.mask = 0;
            cc.suffix.assign(comp.members.size() + 1, 0);
            for (int m : comp.members)
                cc.mask |= 1u << (m - 1);
            for (size_t o = 1; o <= comp.members.size(); ++o)
                cc.suffix[o] = cc.suffix[o - 1] | (1u << (comp.members[comp.members.size() - o] - 1));
            compiled.push_back(std::move(cc));
        }
        layers_.push_back(std::move(compiled));
    }
}

std::uint32_t MaskEvaluator::run(std::uint32_t input) const {
    std::uint32_t cur = input;
    for (const auto& layer : layers_) {
        std::uint32_t next = 0;
        for (const auto& cc : layer)
            next |= cc.suffix[static_cast<size_t>(std::popcount(cur & cc.mask))];
        cur = next;
    }
    return cur;
}

std::vector<std::uint32_t> MaskEvaluator::run_trace(std::uint32_t input) const {
    std::vector<std::uint32_t> arrays{input};
    std::uint32_t cur = input;
    for (const auto& layer : layers_) {
        std::uint32_t next = 0;
        for (const auto& cc : layer)
            next |= cc.suffix[static_cast<size_t>(std::popcount(cur & cc.mask))];
        cur = next;
        arrays.push_back(cur);
    }
    return arrays;
}

std::uint32_t MaskEvaluator::sorted_form(std::uint32_t mask) const {
    int ones = std::popcount(mask);
    std::uint32_t all = n_ == 32 ? ~0u : (1u << n_) - 1;
    return ones == 0 ? 0 : (all & ~((1u << (n_ - ones)) - 1));
}

std::vector<Bit> bits_from_mask(std::uint32_t mask, int n) {
    std::vector<Bit> bits(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        bits[static_cast<size_t>(i)] = (mask >> i) & 1u;
    return bits;
}

std::uint32_t mask_from_bits(const std::vector<Bit>& bits) {
    std::uint32_t mask = 0;
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            mask |= 1u << i;
    return mask;
}

}  // namespace sortnet
