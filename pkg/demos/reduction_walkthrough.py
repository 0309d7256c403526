"""Walk through the Baker-Davenport reduction for a few n.

For n in [2, 37] the linear-form bound leaves x < 4e16.  A convergent q of
gamma = log B_{n+1} / log alpha with q > 6M and a positive
eps = ||mu q|| - M ||gamma q|| shrinks that to x below a few dozen.
"""

from balancing_proof.bounds import baker_davenport_reduce, balancing_instance
from balancing_proof.prover import hp_record

M = 4 * 10**16

for n in (2, 10, 23, 37):
    out = baker_davenport_reduce(balancing_instance(n, M), cf_budget=64)
    eps = hp_record(out.epsilon, 8)["approx"]
    print(
        "n=%2d  q=%-32d convergent #%-3d tried %2d  eps=%-14s  x <= %d"
        % (n, out.q_used, out.convergent_index, out.attempts, eps, out.x_cap)
    )

# large n need many convergents past 6M before eps turns positive
attempts = {
    n: baker_davenport_reduce(balancing_instance(n, M), cf_budget=64).attempts
    for n in range(2, 38)
}
worst = max(attempts, key=attempts.get)
print("most convergents needed: n=%d with %d" % (worst, attempts[worst]))
