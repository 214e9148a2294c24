#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "nlab/grid.hpp"
#include "nlab/kernel.hpp"
#include "nlab/parallel.hpp"

namespace nlab::detail {

struct BlockKey {
    double a = 0.0;
    double b = 0.0;
    int tag = 0;
    bool operator==(const BlockKey&) const = default;
};

struct KeyedBlock {
    Block block;
    BlockKey key;
};

// Maximal runs along axis 1 merged across consecutive rows into rectangles of
// constant key. Cells with tag 0 are dropped.
std::vector<KeyedBlock> keyed_blocks(const GridSpec& spec, const std::vector<BlockKey>& keys);

// Blocks of constant value; every cell gets tag 1.
std::vector<KeyedBlock> value_blocks(const GridFunction& u);

// 2 sum_{P<Q} phi(vP, vQ) K(P, Q) + 2 sum_P phi(vP, 0) Ext(P) with phi
// symmetric and phi(v, v) = 0. Returns +inf when a positive phi meets a
// divergent kernel value.
template <class Phi>
double symmetric_pair_energy(const std::vector<KeyedBlock>& blocks, const PairKernel& k, Phi&& phi) {
    const std::size_t n = blocks.size();
    const double half = parallel_sum(n, [&](std::size_t p) {
        const KeyedBlock& bp = blocks[p];
        double s = 0.0;
        const double e = phi(bp.key.a, 0.0);
        if (e != 0.0) s += e * k.block_exterior(bp.block);
        for (std::size_t q = p + 1; q < n; ++q) {
            const double f = phi(bp.key.a, blocks[q].key.a);
            if (f == 0.0) continue;
            s += f * k.block_pair(bp.block, blocks[q].block);
        }
        return s;
    });
    return 2.0 * half;
}

}  // namespace nlab::detail
