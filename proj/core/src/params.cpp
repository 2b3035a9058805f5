#include "altsssom/params.hpp"

#include <cmath>

#include "altsssom/errors.hpp"

namespace altsssom {

Params default_params(std::size_t n_patterns) {
    Params p;
    p.lp = 0.0015;
    p.beta = 0.925;
    p.age_wins = static_cast<std::size_t>(std::floor(100.5 * static_cast<double>(n_patterns) + 0.5));
    if (p.age_wins == 0) p.age_wins = 1;
    p.e_b = 0.1005;
    p.e_n = 0.501 * p.e_b;
    p.s = 0.055;
    p.minwd = 0.25;
    p.epochs = 51;  // midpoint of [1, 100], rounded half-up
    p.n_max = 200;
    return p;
}

void validate(const Params& p) {
    auto fail = [](const char* field, const char* rule) {
        detail::contract_failure(std::string("parameter ") + field + " must satisfy " + rule);
    };
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.lp) || !(p.lp > 0.0 && p.lp < 1.0)) fail("lp", "0 < lp < 1");
    if (!finite(p.beta) || !(p.beta > 0.0 && p.beta < 1.0)) fail("beta", "0 < beta < 1");
    if (p.age_wins < 1) fail("age_wins", "age_wins >= 1");
    if (!finite(p.e_b) || !(p.e_b > 0.0 && p.e_b <= 1.0)) fail("e_b", "0 < e_b <= 1");
    if (!finite(p.e_n) || !(p.e_n > 0.0 && p.e_n <= 1.0)) fail("e_n", "0 < e_n <= 1");
    if (!finite(p.s) || !(p.s > 0.0)) fail("s", "s > 0");
    if (!finite(p.minwd) || !(p.minwd >= 0.0)) fail("minwd", "minwd >= 0");
    if (p.epochs < 1) fail("epochs", "epochs >= 1");
    if (p.n_max < 1) fail("n_max", "n_max >= 1");
    if (!finite(p.eps_act) || !(p.eps_act > 0.0)) fail("eps_act", "eps_act > 0");
    if (!finite(p.var_floor) || !(p.var_floor > 0.0)) fail("var_floor", "var_floor > 0");
}

}  // namespace altsssom
