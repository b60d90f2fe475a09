"""Rate functions: general quadrature path against the closed forms.

The general path evaluates -kappa (kernel integral) - log w(x) - zeta
from the equilibrium measure alone; for weights with explicit edge
integrals both must agree.  The table samples each family from its
edge outward, where the rate rises from exactly zero.
"""

import numpy as np

from eigtail import (
    bdg_spec, bosonic_spec, limit_edge, make_context, rate_bdg_closed,
    rate_beta_theta, rate_bosonic, rate_general, rate_goe,
    wigner_dyson_spec,
)


def main() -> None:
    print("quadratic weight (beta = 2): rate vs beta * edge integral")
    ctx = make_context(wigner_dyson_spec(2.0))
    for x in (2.0, 2.2, 2.5, 3.0):
        general = rate_beta_theta(ctx, x)
        closed = 2.0 * rate_goe(x)
        print(f"  x={x:4.1f}  general={general:12.8f}  "
              f"closed={closed:12.8f}  diff={abs(general-closed):.2e}")

    print()
    print("square interaction, class D: rate vs closed antiderivative")
    spec = bdg_spec("D")
    ctx = make_context(spec)
    w = spec.weight
    edge = limit_edge(spec)
    for x in np.linspace(edge, 2.0 * edge, 5):
        general = rate_beta_theta(ctx, float(x))
        closed = rate_bdg_closed(w.psi, w.sigma2, w.beta, 1.0, float(x))
        print(f"  x={x:6.3f}  general={general:12.8f}  "
              f"closed={closed:12.8f}  diff={abs(general-closed):.2e}")

    print()
    print("factor pair: rate vs dedicated closed form")
    ctx = make_context(bosonic_spec())
    edge = limit_edge(bosonic_spec())
    for x in (edge, 6.0, 7.0, 9.0):
        general = rate_general(ctx, float(x))
        closed = rate_bosonic(float(x))
        print(f"  x={x:6.3f}  general={general:12.8f}  "
              f"closed={closed:12.8f}  diff={abs(general-closed):.2e}")


if __name__ == "__main__":
    main()
