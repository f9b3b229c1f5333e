# Raising the weight at a single site breaks the inequality: the bump
# gains epsilon * k on u^N while the remainder costs only ~1/log N.
from hardylab.errors import FeasibilityError
from hardylab.optimality import find_witness

for k, eps in [(100, 0.02), (1, 2.0), (10, 0.1), (3, 0.2)]:
    w = find_witness(k, eps)
    print(f"k={k:>4} eps={eps:<5} N={w.level:<5} margin={w.violation_margin:.6f} "
          f"(identity: {w.identity_margin:.6f})")

# below the feasibility gate the bound would need an astronomical N ...
try:
    find_witness(1, 0.001)
except FeasibilityError as exc:
    print("\n", exc)

# ... but an explicit N can still succeed, since R(u^N) ~ 1/log N < 4/log N
w = find_witness(2, 0.2, N=20)
print(f"\nk=2 eps=0.2 at N=20: margin={w.violation_margin:.6f}")
