# D(u) = W(u) + R(u): the Dirichlet energy splits exactly into the
# weighted form and a sum of squares.
import numpy as np

from hardylab.forms import identity_report
from hardylab.numerics import COMPENSATED, EXTENDED, NAIVE
from hardylab.sequences import Sequence, from_pairs, unit

# e_1: D = 2, W = 2 - sqrt(2), R = sqrt(2)
print(identity_report(unit(1)))

rng = np.random.default_rng(0)
idx = np.sort(rng.choice(np.arange(1, 20001), 5000, replace=False))
vals = 10.0 ** rng.uniform(-6, 6, 5000) * np.exp(2j * np.pi * rng.uniform(size=5000))
u = Sequence(dict(zip(idx.tolist(), vals.tolist())))

for mode in (NAIVE, COMPENSATED, EXTENDED):
    r = identity_report(u, mode)
    print(f"{mode.kind:>12}: D = {r.dirichlet:.6e}  residual/D = {r.residual / r.dirichlet:+.2e}")

# inputs need not be random; any finitely supported complex sequence works
print(identity_report(from_pairs([(1, 1j), (4, -2), (9, 0.5 + 0.5j)])))
