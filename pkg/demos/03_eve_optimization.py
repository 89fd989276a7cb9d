"""Search for Eve's best attack at fixed observable fidelities.

Alice and Bob see only the four check fidelities. This script lets the
optimizer hunt for the attack that maximizes Eve's entropy ceiling under
those observations and compares the result with the proven closed form.
"""

from dqkd.attack import forward_fidelities
from dqkd.optimizer import FidelityConstraint, maximize_s_be


def main() -> None:
    cases = [
        (1.00, 1.00, "clean channel: Eve must stay out entirely"),
        (1.00, 0.75, "computational basis untouched, diagonal basis damped"),
        (0.90, 0.90, "balanced 10% disturbance"),
        (0.85, 0.95, "asymmetric disturbance"),
    ]
    for c0sq, cppsq, label in cases:
        result = maximize_s_be(FidelityConstraint(c0sq=c0sq, cppsq=cppsq))
        best = result.best_params
        f = forward_fidelities(best)
        print(label)
        print(f"  observed         f01 = {c0sq:.4f}, fpm = {cppsq:.4f} "
              f"(xi = {cppsq - (1 - c0sq):.4f})")
        print(f"  search result    S = {result.best_entropy:.10f} after "
              f"{result.iterations} evaluations")
        print(f"  closed form      S = {result.closed_form_entropy:.10f}")
        print(f"  gap              {result.gap:.2e}")
        print(f"  maximizer        p = {best.p:.6f}  q = {best.q:.6f}")
        print(f"  reproduces       f01 = {f.f01:.6f}, fpm = {f.fpm:.6f}")
        print()

    print("every search lands on S = 1 + h(xi): the protocol's privacy")
    print("amplification fraction h(xi) is neither loose nor optimistic")


if __name__ == "__main__":
    main()
