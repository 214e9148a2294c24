#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "nlab/errors.hpp"

namespace nlab::detail {

namespace {

template <unsigned N>
Rule make_rule() {
    static_assert(N % 2 == 0);
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    for (std::size_t i = a.size(); i-- > 0;) {
        r.x.push_back(0.5 - 0.5 * a[i]);
        r.w.push_back(0.5 * w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.x.push_back(0.5 + 0.5 * a[i]);
        r.w.push_back(0.5 * w[i]);
    }
    return r;
}

}  // namespace

const Rule& gauss_rule(int n) {
    switch (n) {
        case 2: { static const Rule r = make_rule<2>(); return r; }
        case 4: { static const Rule r = make_rule<4>(); return r; }
        case 6: { static const Rule r = make_rule<6>(); return r; }
        case 8: { static const Rule r = make_rule<8>(); return r; }
        case 10: { static const Rule r = make_rule<10>(); return r; }
        case 12: { static const Rule r = make_rule<12>(); return r; }
        case 16: { static const Rule r = make_rule<16>(); return r; }
        case 20: { static const Rule r = make_rule<20>(); return r; }
        case 24: { static const Rule r = make_rule<24>(); return r; }
        case 32: { static const Rule r = make_rule<32>(); return r; }
        case 40: { static const Rule r = make_rule<40>(); return r; }
        default: throw GuardViolation("unsupported Gauss rule size " + std::to_string(n));
    }
}

}  // namespace nlab::detail
