# On sequences supported in {1..M}, D - W is a tridiagonal matrix.  It is
# positive semidefinite for the KPP weight and factors as C^T C.
from hardylab.spectral import build_form, factorization_residual, smallest_eigenvalue
from hardylab.weights import CLASSICAL, KPP

for M in (10, 100, 1000, 2000):
    lam_kpp = smallest_eigenvalue(build_form(M, KPP))
    lam_cls = smallest_eigenvalue(build_form(M, CLASSICAL))
    print(f"M={M:>5}  lambda_min kpp={lam_kpp:.3e}  classical={lam_cls:.3e}  "
          f"|A - C^T C|={factorization_residual(M):.1e}")

# A single-site bump w + 0.02 delta_100 pushes an eigenvalue below zero.
lam = smallest_eigenvalue(build_form(20000, KPP.perturb(100, 0.02)))
print(f"\nperturbed (k=100, eps=0.02, M=20000): lambda_min = {lam:.6e}")
