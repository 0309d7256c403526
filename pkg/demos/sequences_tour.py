"""A short tour of balancing numbers and the square-difference identity.

Run with ``python3 demos/sequences_tour.py``.
"""

from balancing_proof.numerics import constant, exact
from balancing_proof.sequences import (
    balancing,
    balancing_values,
    is_balancing,
    lucas_balancing,
    power_difference,
    square_difference_oracle,
)

print("B_0..B_12:", balancing_values(12))
print("C_0..C_6: ", [lucas_balancing(n).value for n in range(7)])

# Binet: B_n = (alpha^n - beta^n) / (4 sqrt 2), here as a certified enclosure
a, b = constant("alpha", 60), constant("beta", 60)
enc = (a**30 - b**30) / exact(32, 60).sqrt()
print("B_30 =", balancing(30).value, "enclosed:", enc.contains(balancing(30).value))

# membership via 8N^2 + 1 being a square
for N in (1189, 1190, balancing(200).value):
    r = is_balancing(N)
    print("is_balancing(%s...) -> %s, index %s" % (str(N)[:12], r.is_member, r.index))

# which index does B_{n+1}^2 - B_n^2 land on?
c = square_difference_oracle(200)
print("B_{n+1}^2 - B_n^2 = B_{2n+%d} for every n <= 200" % c)
for n in range(1, 5):
    print("  n=%d: %d = B_%d" % (n, power_difference(n, 2), 2 * n + c))
