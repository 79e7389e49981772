#include "islm/defaults.hpp"

namespace islm {

ModelConfig default_kaldor() {
    ModelConfig c;
    c.alpha = 1.0;
    c.beta = 1.0;
    c.epsilon = 1e-3;
    c.m_s = 1.0;
    c.mp = 0.01;
    c.pi_e = 0.02;
    c.invest = {1.5, 0.9, 1.0, 4.0, 0.4, 0.0};
    c.save = {0.0, 0.4, 0.2};
    c.demand = {0.5, 1.4, 0.0, 1.0, 2.0};
    c.supply = {0.2, 0.6, 0.0};
    c.regime = Regime::KaldorGoods;
    c.fast_side = FastSide::Goods;
    return c;
}

ModelConfig kaldor_cycle() {
    ModelConfig c = default_kaldor();
    // LM steeper than the IS hump everywhere: the crossing is unique for any
    // m_s, and this m_s parks it mid-A2 where the slow drift closes the cycle.
    c.demand.d = 0.25;
    c.supply.e = 0.08;
    c.m_s = 1.25;
    return c;
}

ModelConfig default_three_phase() {
    ModelConfig c;
    c.alpha = 1.0;
    c.beta = 1.0;
    c.epsilon = 1e-3;
    c.m_s = 1.6;
    c.mp = 0.01;
    c.pi_e = 0.02;
    c.invest = {1.0, 0.0, 1.0, 4.0, 0.4, 0.1};
    c.save = {0.0, 0.3, 0.2};
    c.demand = {0.5, 0.0, 3.6, 2.0, 3.0};
    c.supply = {0.2, 0.0, 2.4};
    c.regime = Regime::ThreePhaseMoney;
    c.fast_side = FastSide::Money;
    return c;
}

ModelConfig three_phase_cycle() {
    ModelConfig c = default_three_phase();
    // Gentler cubic: the LM fold window in Y shrinks below the IS traversal,
    // and the shifted intercept parks the equilibrium mid-A2.
    c.m_s = 1.0;
    c.invest.i0 = 2.24;
    c.demand = {0.5, 0.0, 0.3, 2.0, 4.0};
    c.supply = {0.2, 0.0, 0.2};
    return c;
}

ModelConfig original_degenerate() {
    ModelConfig c;
    c.alpha = 1.0;
    c.beta = 1.0;
    c.epsilon = 1.0;
    c.m_s = 1.0;
    c.mp = 0.0;
    c.pi_e = 0.0;
    c.invest = {1.0, 0.0, 1.0, 0.0, 0.4, 0.2};
    c.save = {0.0, 0.4, 0.2};
    c.demand = {0.5, 0.3, 0.0, 1.0, 2.0};
    c.supply = {0.0, 0.0, 0.0};
    c.regime = Regime::OriginalDegenerate;
    c.fast_side = FastSide::Goods;
    return c;
}

} // namespace islm
