#include <string>

#include "pebtep/compile.hpp"
#include "pebtep/error.hpp"

namespace pebtep {

int check_group(int k, const std::vector<int>& table) {
    if (k < 2 || static_cast<std::size_t>(k) * k != table.size())
        throw PreconditionFailed("group table must have k*k entries");
    auto op = [&](int a, int b) { return table[a * k + b]; };
    for (int v : table)
        if (v < 0 || v >= k) throw PreconditionFailed("group table entry outside [k]");
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                if (op(op(a, b), c) != op(a, op(b, c)))
                    throw PreconditionFailed("table is not associative at (" + std::to_string(a) + "," +
                                             std::to_string(b) + "," + std::to_string(c) + ")");
    int e = -1;
    for (int c = 0; c < k && e < 0; ++c) {
        bool ok = true;
        for (int a = 0; a < k && ok; ++a) ok = op(c, a) == a && op(a, c) == a;
        if (ok) e = c;
    }
    if (e < 0) throw PreconditionFailed("table has no identity element");
    for (int a = 0; a < k; ++a) {
        bool inv = false;
        for (int b = 0; b < k && !inv; ++b) inv = op(a, b) == e && op(b, a) == e;
        if (!inv) throw PreconditionFailed("element " + std::to_string(a) + " has no inverse");
    }
    return e;
}

std::vector<int> cyclic_group_table(int k) {
    std::vector<int> t(static_cast<std::size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) t[a * k + b] = (a + b) % k;
    return t;
}

BranchingProgram compile_group_sft(int h, int k, const std::vector<int>& table, bool fixed) {
    check_group(k, table);
    TreeShape shape(h);
    const int first = shape.first_leaf();
    const int leaves = shape.leaf_count();
    BranchingProgram bp(h, k, ProblemVariant::FT, BpVariant::Deterministic);
    auto tag = [](int layer, std::vector<TagEntry> e) { return StateTag{layer, std::move(e)}; };

    // Layer j reads leaf first + j with the running product of the earlier
    // leaves in hand; fixed programs combine in their edges, queried ones go
    // through an f_1 query state per (product, leaf value) pair.
    const int start = bp.add_state(StateLabel::leaf(first), tag(0, {}));
    std::vector<int> finals(k);
    std::vector<int> readers{start};  // readers of the current layer, by product (or just start)
    for (int j = 1; j <= leaves; ++j) {
        const bool last = j == leaves;
        std::vector<int> next(k, -1);
        if (!last || !fixed) {
            for (int p = 0; p < k; ++p)
                next[p] = last ? -1 : bp.add_state(StateLabel::leaf(first + j), tag(2 * j, {}));
        }
        if (last) {
            for (int v = 0; v < k; ++v) finals[v] = bp.add_state(StateLabel::final_value(v), tag(2 * j, {}));
            next = finals;
        }
        for (std::size_t r = 0; r < readers.size(); ++r) {
            const int p = j == 1 ? -1 : static_cast<int>(r);
            for (int v = 0; v < k; ++v) {
                if (p < 0) {
                    bp.add_edge(readers[r], next[v], v);  // first leaf: product is v
                } else if (fixed) {
                    bp.add_edge(readers[r], next[table[p * k + v]], v);
                } else {
                    const int q = bp.add_state(StateLabel::func(1, p, v), tag(2 * j - 1, {}));
                    bp.add_edge(readers[r], q, v);
                    for (int w = 0; w < k; ++w) bp.add_edge(q, next[w], w);
                }
            }
        }
        readers = next;
    }
    bp.set_start(start);
    bp.finalize();
    return bp;
}

BranchingProgram canonical_adder(int k) {
    BranchingProgram bp(2, k, ProblemVariant::FT, BpVariant::Deterministic);
    const int s = bp.add_state(StateLabel::leaf(2));
    std::vector<int> byu(k), out(k);
    for (int u = 0; u < k; ++u) byu[u] = bp.add_state(StateLabel::leaf(3));
    for (int v = 0; v < k; ++v) out[v] = bp.add_state(StateLabel::final_value(v));
    for (int u = 0; u < k; ++u) bp.add_edge(s, byu[u], u);
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) bp.add_edge(byu[u], out[(u + v) % k], v);
    bp.set_start(s);
    bp.finalize();
    return bp;
}

BranchingProgram canonical_two_pair_adder(int k) {
    BranchingProgram bp(3, k, ProblemVariant::FT, BpVariant::Deterministic);
    bp.set_output_arity(k * k);
    const int s = bp.add_state(StateLabel::leaf(4));
    std::vector<int> byu(k), bys(k), bysw(k * k), out(k * k);
    for (int u = 0; u < k; ++u) byu[u] = bp.add_state(StateLabel::leaf(5));
    for (int x = 0; x < k; ++x) bys[x] = bp.add_state(StateLabel::leaf(6));
    for (int x = 0; x < k * k; ++x) bysw[x] = bp.add_state(StateLabel::leaf(7));
    for (int x = 0; x < k * k; ++x) out[x] = bp.add_state(StateLabel::final_value(x));
    for (int u = 0; u < k; ++u) bp.add_edge(s, byu[u], u);
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) bp.add_edge(byu[u], bys[(u + v) % k], v);
    for (int a = 0; a < k; ++a)
        for (int w = 0; w < k; ++w) bp.add_edge(bys[a], bysw[a * k + w], w);
    for (int a = 0; a < k; ++a)
        for (int w = 0; w < k; ++w)
            for (int x = 0; x < k; ++x) bp.add_edge(bysw[a * k + w], out[a * k + (w + x) % k], x);
    bp.set_start(s);
    bp.finalize();
    return bp;
}

}  // namespace pebtep
