#include "pairsum.hpp"

namespace nlab::detail {

std::vector<KeyedBlock> keyed_blocks(const GridSpec& spec, const std::vector<BlockKey>& keys) {
    std::vector<KeyedBlock> out;
    const int m = spec.cells_per_axis();
    if (spec.dim() == 1) {
        for (int i = 0; i < m;) {
            int j = i + 1;
            while (j < m && keys[j] == keys[i]) ++j;
            if (keys[i].tag != 0) out.push_back({{i, j - i, 0, 1}, keys[i]});
            i = j;
        }
        return out;
    }
    // open[j0] = index in out of the rectangle whose last row has a run
    // starting at column j0, or -1.
    std::vector<long> open(static_cast<std::size_t>(m), -1), next(static_cast<std::size_t>(m), -1);
    for (int r = 0; r < m; ++r) {
        std::fill(next.begin(), next.end(), -1);
        for (int c = 0; c < m;) {
            const BlockKey& key = keys[spec.flat({r, c})];
            int e = c + 1;
            while (e < m && keys[spec.flat({r, e})] == key) ++e;
            if (key.tag != 0) {
                const long o = open[c];
                if (o >= 0 && out[o].block.n1 == e - c && out[o].key == key) {
                    ++out[o].block.n0;
                    next[c] = o;
                } else {
                    out.push_back({{r, 1, c, e - c}, key});
                    next[c] = static_cast<long>(out.size()) - 1;
                }
            }
            c = e;
        }
        std::swap(open, next);
    }
    return out;
}

std::vector<KeyedBlock> value_blocks(const GridFunction& u) {
    std::vector<BlockKey> keys(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) keys[i] = {u[i], 0.0, 1};
    return keyed_blocks(u.spec(), keys);
}

}  // namespace nlab::detail
