#include "pebtep/tree.hpp"

#include <string>

#include "pebtep/error.hpp"

namespace pebtep {

TreeShape::TreeShape(int height) : height_(height) {
    if (height < 2 || height > 30) throw InvalidArgument("tree height must be in [2, 30]");
}

NodeRelations node_relations(const TreeShape& shape, int node) {
    if (!shape.contains(node))
        throw InvalidArgument("node " + std::to_string(node) + " out of range for height " +
                              std::to_string(shape.height()));
    NodeRelations r;
    if (node > 1) {
        r.parent = node / 2;
        r.sibling = node ^ 1;
    }
    if (shape.is_internal(node)) {
        r.left = 2 * node;
        r.right = 2 * node + 1;
    }
    return r;
}

std::string_view to_string(ProblemVariant v) { return v == ProblemVariant::FT ? "FT" : "BT"; }

ProblemVariant parse_problem_variant(std::string_view s) {
    if (s == "FT") return ProblemVariant::FT;
    if (s == "BT") return ProblemVariant::BT;
    throw ParseError("unknown problem variant '" + std::string(s) + "'");
}

TepInstance::TepInstance(TreeShape shape, int k, ProblemVariant variant)
    : shape_(shape), k_(k), variant_(variant) {
    if (k < 2 || k > kMaxAlphabet) throw InvalidArgument("alphabet size k must be in [2, 65536]");
    leaves_.assign(shape_.leaf_count(), 0);
    tables_.resize(shape_.first_leaf());
    for (int i = 1; i < shape_.first_leaf(); ++i) tables_[i].assign(static_cast<std::size_t>(k) * k, 0);
}

void TepInstance::set_leaf(int node, int value) {
    if (!shape_.is_leaf(node)) throw InvalidArgument("set_leaf on non-leaf " + std::to_string(node));
    leaves_[node - shape_.first_leaf()] = value;
}

void TepInstance::set_func(int node, int x, int y, int value) {
    if (!shape_.is_internal(node)) throw InvalidArgument("set_func on leaf " + std::to_string(node));
    tables_[node][x * k_ + y] = value;
}

void TepInstance::fill_func(int node, int value) {
    if (!shape_.is_internal(node)) throw InvalidArgument("fill_func on leaf " + std::to_string(node));
    tables_[node].assign(tables_[node].size(), value);
}

void TepInstance::validate() const {
    for (int v : leaves_)
        if (v < 0 || v >= k_) throw InvalidArgument("leaf value out of [k]");
    for (int i = 1; i < shape_.first_leaf(); ++i) {
        int hi = (i == 1 && variant_ == ProblemVariant::BT) ? 2 : k_;
        for (int v : tables_[i])
            if (v < 0 || v >= hi)
                throw InvalidArgument("table entry of f_" + std::to_string(i) + " out of range");
    }
}

NodeValues evaluate(const TepInstance& instance) {
    const TreeShape& shape = instance.shape();
    NodeValues out;
    out.values.assign(shape.node_count() + 1, 0);
    for (int i = shape.node_count(); i >= 1; --i) {
        out.values[i] = shape.is_leaf(i) ? instance.leaf(i)
                                         : instance.func(i, out.values[2 * i], out.values[2 * i + 1]);
    }
    return out;
}

// --- E --------------------------------------------------------------------

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp) {
    unsigned __int128 r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r > (static_cast<unsigned __int128>(1) << 63)) throw BudgetExceeded("count exceeds 2^63");
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t count_hard_inputs(int h, int k) {
    TreeShape shape(h);
    return checked_pow(static_cast<std::uint64_t>(k), shape.non_root_count());
}

TepInstance hard_input(int h, int k, std::span<const int> values) {
    TreeShape shape(h);
    if (static_cast<int>(values.size()) != shape.non_root_count())
        throw InvalidArgument("hard input needs exactly N = 2^h - 2 values");
    TepInstance inst(shape, k, ProblemVariant::BT);
    auto v = [&](int node) { return values[node - 2]; };
    for (int node = 2; node <= shape.node_count(); ++node) {
        if (v(node) < 0 || v(node) >= k) throw InvalidArgument("hard input value out of [k]");
    }
    inst.fill_func(1, 1);
    for (int node = 2; node < shape.first_leaf(); ++node)
        inst.set_func(node, v(2 * node), v(2 * node + 1), v(node));
    for (int node = shape.first_leaf(); node <= shape.node_count(); ++node) inst.set_leaf(node, v(node));
    return inst;
}

std::vector<int> hard_input_values_at(int h, int k, std::uint64_t index) {
    TreeShape shape(h);
    std::vector<int> values(shape.non_root_count());
    for (int pos = shape.non_root_count() - 1; pos >= 0; --pos) {
        values[pos] = static_cast<int>(index % k);
        index /= k;
    }
    return values;
}

TepInstance hard_input_at(int h, int k, std::uint64_t index) {
    auto values = hard_input_values_at(h, k, index);
    return hard_input(h, k, values);
}

void for_each_hard_input(int h, int k, const std::function<void(const TepInstance&)>& visit) {
    TreeShape shape(h);
    count_hard_inputs(h, k);  // overflow guard
    std::vector<int> values(shape.non_root_count(), 0);
    while (true) {
        visit(hard_input(h, k, values));
        int pos = static_cast<int>(values.size()) - 1;
        while (pos >= 0 && values[pos] == k - 1) values[pos--] = 0;
        if (pos < 0) break;
        ++values[pos];
    }
}

TepInstance random_hard_input(int h, int k, std::mt19937_64& rng) {
    TreeShape shape(h);
    std::uniform_int_distribution<int> dist(0, k - 1);
    std::vector<int> values(shape.non_root_count());
    for (int& v : values) v = dist(rng);
    return hard_input(h, k, values);
}

// --- all instances ----------------------------------------------------------

namespace {

// Radix of every digit, most significant first.
std::vector<int> instance_radices(const TreeShape& shape, int k, ProblemVariant variant) {
    std::vector<int> radices;
    for (int node = 1; node < shape.first_leaf(); ++node) {
        int r = (node == 1 && variant == ProblemVariant::BT) ? 2 : k;
        radices.insert(radices.end(), static_cast<std::size_t>(k) * k, r);
    }
    radices.insert(radices.end(), shape.leaf_count(), k);
    return radices;
}

TepInstance instance_from_digits(const TreeShape& shape, int k, ProblemVariant variant,
                                 const std::vector<int>& digits) {
    TepInstance inst(shape, k, variant);
    std::size_t pos = 0;
    for (int node = 1; node < shape.first_leaf(); ++node)
        for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y) inst.set_func(node, x, y, digits[pos++]);
    for (int node = shape.first_leaf(); node <= shape.node_count(); ++node) inst.set_leaf(node, digits[pos++]);
    return inst;
}

}  // namespace

std::optional<std::uint64_t> count_instances(int h, int k, ProblemVariant variant) {
    TreeShape shape(h);
    unsigned __int128 total = 1;
    for (int r : instance_radices(shape, k, variant)) {
        total *= static_cast<unsigned>(r);
        if (total > (static_cast<unsigned __int128>(1) << 63)) return std::nullopt;
    }
    return static_cast<std::uint64_t>(total);
}

TepInstance instance_at(int h, int k, ProblemVariant variant, std::uint64_t index) {
    TreeShape shape(h);
    auto radices = instance_radices(shape, k, variant);
    std::vector<int> digits(radices.size());
    for (int pos = static_cast<int>(radices.size()) - 1; pos >= 0; --pos) {
        digits[pos] = static_cast<int>(index % radices[pos]);
        index /= radices[pos];
    }
    if (index != 0) throw InvalidArgument("instance index out of range");
    return instance_from_digits(shape, k, variant, digits);
}

void enumerate_all_instances(int h, int k, ProblemVariant variant, std::uint64_t cap,
                             const std::function<void(const TepInstance&)>& visit) {
    auto count = count_instances(h, k, variant);
    if (!count || *count > cap)
        throw BudgetExceeded("instance count of " + std::string(to_string(variant)) + "(" + std::to_string(h) +
                             ",2," + std::to_string(k) + ") exceeds cap " + std::to_string(cap));
    TreeShape shape(h);
    auto radices = instance_radices(shape, k, variant);
    std::vector<int> digits(radices.size(), 0);
    TepInstance inst = instance_from_digits(shape, k, variant, digits);
    const int n_table_digits = static_cast<int>(radices.size()) - shape.leaf_count();
    // Odometer over the digit vector, patching only the digits that change.
    auto apply_digit = [&](int pos) {
        if (pos >= n_table_digits) {
            inst.set_leaf(shape.first_leaf() + (pos - n_table_digits), digits[pos]);
        } else {
            int node = 1 + pos / (k * k);
            int cell = pos % (k * k);
            inst.set_func(node, cell / k, cell % k, digits[pos]);
        }
    };
    while (true) {
        visit(inst);
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0 && digits[pos] == radices[pos] - 1) {
            digits[pos] = 0;
            apply_digit(pos);
            --pos;
        }
        if (pos < 0) break;
        ++digits[pos];
        apply_digit(pos);
    }
}

TepInstance random_instance(int h, int k, ProblemVariant variant, std::mt19937_64& rng) {
    TreeShape shape(h);
    auto radices = instance_radices(shape, k, variant);
    std::vector<int> digits(radices.size());
    for (std::size_t i = 0; i < radices.size(); ++i)
        digits[i] = std::uniform_int_distribution<int>(0, radices[i] - 1)(rng);
    return instance_from_digits(shape, k, variant, digits);
}

}  // namespace pebtep
