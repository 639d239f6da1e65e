"""The Duhamel map contracts on the lifespan interval.

For small data and delta from the lifespan rule, successive Picard
differences shrink by far more than the factor 1/4 the existence proof
uses.  Scanning delta upward shows the ratios growing with the interval.
"""

from ckdv import GridSpec, initial_profile, lifespan, make_majda_biello, picard_contraction_study
from ckdv.spectral import dealias_state

state = dealias_state(initial_profile("sech2", {"amplitude_u": 0.1, "amplitude_v": 0.1}, GridSpec()))
delta = lifespan(state.u_hat.l2_norm(), state.v_hat.l2_norm())
study = picard_contraction_study(state, make_majda_biello(1.0), [delta * f for f in (1, 4, 16, 64)])

for cell in study.cells:
    print(f"delta = {cell.delta:8.4f}: d_n = " + ", ".join(f"{d:.1e}" for d in cell.differences)
          + f"   max ratio {cell.max_ratio:.3f}")
print(f"first delta without contraction: {study.delta_star}")
