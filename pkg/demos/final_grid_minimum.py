"""Where the final (x, t) grid gets closest to zero, and what that still buys.

Each cell is |alpha^-t 32^((x-1)/2) (1 -/+ alpha^-x)^-1 - 1|.  A solution
with n >= 38 would make some cell smaller than 4 / alpha^n.
"""

import mpmath

from balancing_proof.numerics import constant
from balancing_proof.prover import final_grid

best, all_above, stats = final_grid(100)
print("cells evaluated:", stats["cells"])
print("cells at or below 1/10:", stats["not_above_threshold"])
print(
    "smallest cell: x=%d t=%d (%s) value %s"
    % (best.x, best.t, best.sign_variant, mpmath.nstr(best.value.approx, 12))
)

# 4 / alpha^n < v  once  n > log(4/v) / log(alpha)
u = (4 / best.value).log() / constant("log_alpha", best.value.digits)
print("so a solution needs n <= %d, far below 38" % (u.ceil_upper() - 1))

# the cell is tiny when t / (x - 1) is close to log(4 sqrt 2) / log(alpha),
# and 58/59 is one of its convergents
gamma = constant("log_4sqrt2", 50) / constant("log_alpha", 50)
print("gamma = %s, 58/59 = %s" % (mpmath.nstr(gamma.approx, 12), mpmath.nstr(mpmath.mpf(58) / 59, 12)))
