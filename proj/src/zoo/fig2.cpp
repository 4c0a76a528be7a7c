#include "decnet/zoo/fig2.hpp"

#include <cmath>

namespace decnet::zoo {

double fig2_expected_utility(double t, int v) {
  const double scale = std::pow(2.0, -t / 2.0);
  const double angle = t * M_PI / 4.0;
  return scale * (v == 1 ? std::sin(angle) : std::cos(angle));
}

Fig2Model fig2_network(const Fig2Config& config) {
  if (!(config.lo >= 0.0 && config.lo < config.hi))
    fail(ErrorKind::InvalidParameter, "fig2: need 0 <= lo < hi");
  ModelBuilder b;
  Fig2Model out;
  out.config = config;
  out.pa = b.uniform(config.lo, config.hi, "pa");
  out.proc = b.chain(
      out.pa,
      [](const Value& t) {
        // Uniform draws can land exactly on a zero lower bound; keep the
        // gamma shape in its open domain.
        double shape = std::max(t.as_real(), 1e-12);
        ModelBuilder f;
        ElementId root = f.gamma(shape);
        return ChainOutcome::fresh(std::move(f).build(), root);
      },
      {}, "proc");
  out.dec = b.decision(out.pa, {Value::integer(0), Value::integer(1)}, "dec");
  out.util = b.apply(
      {out.dec, out.proc},
      [](std::span<const Value> vs) {
        double p = vs[1].as_real();
        return Value::real(vs[0].as_integer() == 1 ? std::sin(p) : std::cos(p));
      },
      "util");
  b.designate_utility(out.util);
  out.model = std::move(b).build();
  out.model.set_utility_hook(out.dec, [](const Value& t, const Value& v) {
    return fig2_expected_utility(t.as_real(), static_cast<int>(v.as_integer()));
  });
  return out;
}

}  // namespace decnet::zoo
