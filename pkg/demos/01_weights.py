# The improved Hardy weight against the classical one.
#
# w_n = 2 - sqrt((n+1)/n) - sqrt((n-1)/n) beats 1/(4 n^2) at every n,
# and the excess decays like 5/(64 n^4).
from hardylab.numerics import EXTENDED
from hardylab.weights import classical_weight, kpp_weight, weight_gap

print(f"{'n':>8} {'w_n':>22} {'1/(4n^2)':>22} {'n^4 * gap':>14}")
for n in (1, 2, 3, 10, 100, 1000, 10**4, 10**5):
    print(f"{n:>8} {kpp_weight(n):>22.15e} {classical_weight(n):>22.15e} "
          f"{n**4 * weight_gap(n):>14.10f}")

# The literal formula cancels catastrophically in binary64.  In 256-bit
# arithmetic it is fine and agrees with the product form used for floats.
n = 10**7
print("\nn = 1e7, binary64 product form :", kpp_weight(n))
print("n = 1e7, 256-bit literal form   :", float(kpp_weight(n, EXTENDED)))
