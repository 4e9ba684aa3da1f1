"""Local solubility and the per-place invariants of the quaternion class.

The class is represented by Hilbert symbols in six interchangeable forms; at
any certified local point the first well-defined representative is evaluated.
The surface has points over R and every Q_p, yet the invariant at the real
place is 1/2 while every finite place contributes 0, so the adelic sum can
never vanish: no rational point can exist.
"""

from k3hasse.brauer import (
    build_invariant_profile,
    bm_verdict,
    certify_everywhere_local,
    evaluate_invariant,
)
from k3hasse.pipeline import load_fixtures
from k3hasse.surface import build_k3

fx = load_fixtures()
X = build_k3(fx.sextet)

print("local points at small and bad places (box-1 witnesses):")
attestation = certify_everywhere_local(X, fx.bad_primes, box=1)
for place in attestation.checked_places:
    pt = attestation.witnesses[place]
    label = str(place) if len(str(place)) < 12 else str(place)[:12] + "..."
    print(f"  {label:>16}: x = {tuple(map(int, pt.x))}, f(x) = {pt.value}")

print("\ninvariant of the class at each witness:")
for place, pt in attestation.witnesses.items():
    inv = evaluate_invariant(fx.sextet, pt, place)
    label = str(place) if len(str(place)) < 12 else str(place)[:12] + "..."
    print(f"  {label:>16}: inv = {inv}")

print("\nassembled profile (theorem-backed constancy at every place):")
profile = build_invariant_profile(X, fx.bad_primes)
for place in sorted(profile.entries):
    entry = profile.entries[place]
    label = str(place) if len(str(place)) < 12 else str(place)[:12] + "..."
    print(f"  {label:>16}: {entry.value}  [{entry.basis}]")
print("\nsum over all places:", profile.total())
print("verdict:", bm_verdict(profile))
