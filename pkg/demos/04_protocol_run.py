"""One full protocol run, round by round in aggregate.

Simulates the two-way exchange under a mild attack plus backward noise,
prints the estimates Alice and Bob would actually compute, and shows the
abort rule tripping when the attack gets too greedy.
"""

from dqkd.attack import named_attack
from dqkd.protosim import ProtocolConfig, run_protocol


def show(label: str, config: ProtocolConfig) -> None:
    stats, report = run_protocol(config)
    print(label)
    print(f"  rounds           {config.n} total: {stats.n_check_consistent} "
          f"consistent checks, {stats.n_check_discarded} discarded checks,")
    print(f"                   {stats.n_announced} announced bits, "
          f"{stats.m} raw key bits")
    print(f"  estimates        xi = {stats.est_xi:.4f} (se {stats.se_xi:.4f}), "
          f"e = {stats.est_e:.4f} (se {stats.se_e:.4f})")
    if stats.aborted:
        print("  outcome          ABORT: the margin fell below 1/2")
    else:
        print(f"  outcome          r_final = {report.r_final:.4f}, about "
              f"{stats.k_est} secret bits from this run")
    print()


def main() -> None:
    show(
        "honest channel, quiet return path",
        ProtocolConfig(attack=named_attack("identity"), n=200_000, seed=7),
    )
    show(
        "5% symmetric attack plus 2% backward noise",
        ProtocolConfig(
            attack=named_attack("symmetric", e=0.05),
            n=200_000, backward_noise=0.02, seed=7,
        ),
    )
    show(
        "30% symmetric attack: too greedy, the checks catch it",
        ProtocolConfig(
            attack=named_attack("symmetric", e=0.3),
            n=200_000, seed=7, abort_slack_z=3.0,
        ),
    )
    show(
        "full measurement attack: boundary case, rejected once slack is demanded",
        ProtocolConfig(
            attack=named_attack("measure_z"), n=200_000, seed=7, abort_slack_z=3.0,
        ),
    )

    print("the forward checks alone decide survival; backward noise only")
    print("costs error correction, never secrecy, because the returning")
    print("qubit carries the same mixed state whichever bit was encoded")


if __name__ == "__main__":
    main()
