"""Gevrey commutators: the price of moving e^{sigma|D|} through a product.

Two views.  Pointwise, the weight inequality bounds the symbol of the
commutator by (4 sigma <x1><x2>/<x1+x2>)^rho; a brute-force scan confirms
it.  In norm, |f1| and |f2| grow like sigma^p with p close to 1 for smooth
data, comfortably above the rho < 3/4 the analysis needs.
"""

import numpy as np

from ckdv import GridSpec, commutator_inequality_scan, commutator_scaling_fit, initial_profile
from ckdv import make_hirota_satsuma, make_majda_biello

rep = commutator_inequality_scan()
print(f"weight inequality: max ratio {rep.max_ratio:.15f} over {rep.n_tuples} tuples, worst at {rep.worst}")

state = initial_profile("sech2", {}, GridSpec())
sigmas = np.logspace(-3, -1, 9)
for name, coeffs in (("MB(1)", make_majda_biello(1.0)), ("HS(0.1, 1)", make_hirota_satsuma(0.1, 1.0))):
    fits = commutator_scaling_fit(state, coeffs, sigmas)
    for term, fit in fits.items():
        print(f"{name:10s} {term}: |{term}| ~ sigma^{fit.exponent:.3f} (+- {fit.stderr:.3f})")
