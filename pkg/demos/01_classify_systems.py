"""Which coupled systems does the analyticity-radius result cover?

The answer depends only on the dispersion ratio a2/a1 and, inside two
bands, on equalities among the coupling constants.  Here we walk the
Majda-Biello and Hirota-Satsuma families across their parameter ranges.
"""

import numpy as np

from ckdv import classify, make_hirota_satsuma, make_majda_biello

print("Majda-Biello (a1 = 1, couplings all -1):")
for a2 in (-2.0, 0.5, 1.0, 2.0, 4.0, 6.0):
    print("  ", classify(make_majda_biello(a2)).summary())

print("\nHirota-Satsuma (a2 = 1, c21 = 0, c22 = -3), c12 = 1:")
for a1 in (-1.0, 0.1, 0.25, 0.5, 1.0):
    print("  ", classify(make_hirota_satsuma(a1, 1.0)).summary())

# A dense sweep shows the admissible set of each family.
a2 = np.linspace(-3, 8, 1101)
ok = np.array([classify(make_majda_biello(x)).admissible for x in a2 if x != 0])
print(f"\nMB admissible on {ok.sum()} of {ok.size} sampled a2 values (a2 < 0, a2 = 1, a2 > 4)")
