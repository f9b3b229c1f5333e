# The ground state sqrt(n) kills every remainder term.  Cutting it off
# logarithmically between N and N^2 keeps the remainder below 4/log N.
import math

from hardylab.optimality import probe_remainder

print(f"{'N':>6} {'R(u^N)':>12} {'4/log N':>10} {'R log N':>8}")
for N in (2, 4, 8, 16, 32, 64, 128, 256, 512):
    p = probe_remainder(N)
    print(f"{N:>6} {p.remainder:>12.8f} {p.paper_bound:>10.6f} {p.remainder * math.log(N):>8.4f}")

print("\nbound chain at N = 64:")
for label, value in probe_remainder(64).chain:
    print(f"  {label:>15}: {value:.10f}")
