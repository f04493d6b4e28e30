"""
Exact prime counts and least primes in progressions
===================================================
"""

from chebcert import primes, sandbox_check_lemma32

print("pi(10^6) =", primes.prime_count(10**6))
print("prime powers up to 100:", primes.prime_powers_up_to(100))

rec = sandbox_check_lemma32(10**6)
print(rec.summary())
print("tightest x for the prime-count bound:", rec.details["rosser_tightest"])
for row in rec.details["tail_rows"]:
    print(row)

# least primes in each residue class and the cyclotomic discriminant
for q in (4, 5, 12, 101):
    least = primes.least_primes_in_progressions(q)
    disc = primes.cyclotomic_discriminant(q)
    print(f"q={q}: discriminant has {len(str(disc))} digits, largest least prime {max(least.values())}")
