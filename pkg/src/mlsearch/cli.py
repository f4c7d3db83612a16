"""Command line front end.

Subcommands: solve (budget decision or minimize), enumerate (minimal
members), family (build and store a subset-cover family), verify
(covering / uniformity / counting diagnostics), bench (growth rates,
schedules, kernel timings).

Exit codes: 0 for Yes / success, 1 for No / a failed check, 2 for usage
or input errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import secrets
import sys
import time
from fractions import Fraction

import numpy as np

from . import _kernels as kernels
from .core import ElementSet, MlsError, Mode, NoSolution, UniverseInfo
from .driver import deterministic_search, minimize, randomized_search
from .enumeration import check_counting_bound, check_uniformity, enumerate_all
from .family import default_cache, kappa, load_family, save_family, verify_covering
from .generators import random_hitting_set, random_min_ones_cnf, random_tournament
from .problems import PROBLEM_NAMES, HittingSetInstance, parse_instance

REPORT_VERSION = 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _resolve_seed(args) -> int:
    """One seed drives all randomness; draw and announce one when absent."""
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"# seed {args.seed}", file=sys.stderr)
    return args.seed


def _rate_base(c: Fraction) -> str:
    return f"{float(2 - Fraction(1) / c):.4f}"


def _apply_overrides(system, c_text, permissive) -> bool:
    from .core import InvalidParams

    contract = system.contract
    hypothetical = c_text is not None
    if hypothetical:
        try:
            base = Fraction(c_text)
        except (ValueError, ZeroDivisionError):
            raise InvalidParams(f"cannot read oracle base {c_text!r}") from None
        contract = dataclasses.replace(contract, extension_base=base)
    if permissive:
        contract = dataclasses.replace(
            contract, mode=Mode.PERMISSIVE, certifying=False
        )
    system.contract = contract
    return hypothetical


def _names(system, member: ElementSet) -> list[str]:
    return [system.universe.name_of(e) for e in member.elements()]


def _schedule_rows(schedule):
    if schedule is None:
        return None
    return [
        {
            "k_prime": p.k_prime,
            "t": p.t,
            "repetitions": p.repetitions,
            "success_probability": str(p.success_probability),
        }
        for p in schedule.plans
    ]


def _emit(report, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _cmd_solve(args) -> int:
    if args.mode == "rand":
        _resolve_seed(args)
    elif args.seed is None:
        args.seed = 0  # deterministic paths spend no randomness
    text = _read_text(args.infile)
    system = parse_instance(args.problem, text)
    hypothetical = _apply_overrides(system, args.c, args.permissive)
    contract = system.contract
    report = {
        "report_version": REPORT_VERSION,
        "command": "solve",
        "problem": args.problem,
        "instance_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "universe": system.universe.n,
        "oracle_base": str(contract.extension_base),
        "rate_base": _rate_base(contract.extension_base),
        "hypothetical_oracle": hypothetical,
        "oracle_mode": contract.mode.value,
        "certifying": contract.certifying,
        "seed": args.seed,
        "threads": args.threads,
        "method": "randomized" if args.mode == "rand" else "deterministic",
    }
    lines: list[str] = []

    if args.minimize:
        try:
            res = minimize(
                system, method=report["method"], seed=args.seed, threads=args.threads
            )
        except NoSolution:
            report.update(
                minimize=True,
                decision=False,
                k_min=None,
                witness=None,
                probes=None,
                oracle_calls=None,
                nodes=None,
                leaves=None,
                elapsed=0.0,
            )
            _emit(report, args.json, ["No (no member at any size)"])
            return 1
        witness = _names(system, res.witness) if res.witness is not None else None
        report.update(
            minimize=True,
            decision=True,
            k_min=res.k_min,
            witness=witness,
            probes=[list(p) for p in res.probes],
            oracle_calls=res.oracle_calls,
            nodes=res.nodes,
            leaves=res.leaves,
            elapsed=res.elapsed,
        )
        lines.append(f"minimum size: {res.k_min}")
        if witness is not None:
            lines.append("witness: " + " ".join(witness))
        lines.append(f"oracle calls: {res.oracle_calls}")
        _emit(report, args.json, lines)
        return 0

    if args.mode == "rand":
        res = randomized_search(system, args.k, seed=args.seed, threads=args.threads)
    else:
        res = deterministic_search(system, args.k, threads=args.threads)
    witness = _names(system, res.witness) if res.witness is not None else None
    report.update(
        minimize=False,
        decision=res.decision,
        k=res.k,
        searched_k=res.searched_k,
        witness=witness,
        oracle_calls=res.oracle_calls,
        nodes=res.nodes,
        leaves=res.leaves,
        schedule=_schedule_rows(res.schedule),
        reps_executed=[list(r) for r in res.reps_executed],
        elapsed=res.elapsed,
    )
    lines.append("Yes" if res.decision else "No")
    if witness is not None:
        lines.append("witness: " + " ".join(witness))
    lines.append(f"oracle calls: {res.oracle_calls}")
    _emit(report, args.json, lines)
    return 0 if res.decision else 1


def _cmd_enumerate(args) -> int:
    text = _read_text(args.infile)
    system = parse_instance(args.problem, text)
    method = "randomized" if args.mode == "rand" else "deterministic"
    seed = _resolve_seed(args) if method == "randomized" else 0
    members = enumerate_all(system, args.max_size, method=method, seed=seed)
    if args.json:
        rows = [
            {"mask": m.to_hex(), "size": len(m), "names": _names(system, m)}
            for m in members
        ]
        print(
            json.dumps(
                {
                    "report_version": REPORT_VERSION,
                    "command": "enumerate",
                    "problem": args.problem,
                    "instance_sha256": hashlib.sha256(text.encode()).hexdigest(),
                    "count": len(members),
                    "members": rows,
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 0
    for m in members:
        print(" ".join(_names(system, m)) if args.names else m.to_hex())
    print(f"# {len(members)} minimal members", file=sys.stderr)
    return 0


def _cmd_family(args) -> int:
    fam = default_cache().get(args.n, args.p, args.q, args.construction)
    if args.out:
        save_family(fam, args.out)
        print(
            f"{fam.construction} family n={fam.n} p={fam.p} q={fam.q} "
            f"size={len(fam)} (lower bound {float(kappa(fam.n, fam.p, fam.q)):.1f}) "
            f"-> {args.out}"
        )
    else:
        print(f"sepfam v1 {fam.n} {fam.p} {fam.q} {len(fam)}")
        for m in fam.masks:
            print(format(m, "x"))
    return 0


def _random_systems(problem: str, n: int, trials: int, seed: int):
    """Random instances of one backend at universe size n, one per trial."""
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(n,)))
    )
    d = min(3, n)  # width caps at the universe for tiny sweeps
    for _ in range(trials):
        if problem == "hs":
            yield random_hitting_set(n, 2 * n, d, rng)
        elif problem == "sat":
            yield random_min_ones_cnf(n, 2 * n, d, rng)
        else:
            yield random_tournament(n, rng)


def _verify_one_uniformity(system, max_k) -> tuple[bool, float, list[str]]:
    rep = check_uniformity(system, max_k=max_k)
    lines = [
        f"violation: base {b.to_hex()} k={k} slice size {s}"
        for b, k, s in rep.violations[:10]
    ]
    return rep.ok, rep.max_ratio, lines


def _cmd_verify(args) -> int:
    if args.check == "covering":
        if args.infile:
            fam = load_family(args.infile)
        elif None in (args.n, args.p, args.q):
            print("error: covering needs --in or all of --n --p --q", file=sys.stderr)
            return 2
        else:
            fam = default_cache().get(args.n, args.p, args.q, args.construction)
        if args.samples is None:
            rep = verify_covering(fam)
        else:
            rep = verify_covering(
                fam, exhaustive=False, samples=args.samples, seed=_resolve_seed(args)
            )
        how = "sampled" if rep.sampled else "exhaustive"
        if rep.ok:
            print(f"covering ok ({how}, checked {rep.checked} p-sets)")
            return 0
        print(f"covering FAILED: p-set {rep.missed.to_hex()} contains no member")
        return 1

    if args.check not in ("uniformity", "counting"):  # argparse guards this
        return 2
    if not args.problem:
        print(f"error: {args.check} needs --problem", file=sys.stderr)
        return 2

    if args.infile:
        systems = [(args.infile, parse_instance(args.problem, _read_text(args.infile)))]
    elif args.n_max is not None:
        seed = _resolve_seed(args)
        lo = 4 if args.check == "uniformity" else 2
        systems = [
            (f"random n={n} #{i}", sys_)
            for n in range(min(lo, args.n_max), args.n_max + 1)
            for i, sys_ in enumerate(_random_systems(args.problem, n, args.trials, seed))
        ]
    else:
        print(f"error: {args.check} needs --in or --n-max", file=sys.stderr)
        return 2

    if args.check == "uniformity":
        worst = 0.0
        checked = 0
        for label, system in systems:
            ok, ratio, lines = _verify_one_uniformity(system, args.max_k)
            worst = max(worst, ratio)
            checked += 1
            if not ok:
                print(f"uniformity FAILED on {label}")
                for line in lines:
                    print(line)
                return 1
        print(f"checked {checked} instances, max |slice|/u^k ratio {worst:.3f}")
        print("uniformity ok")
        return 0

    worst_ratio = 0.0
    for label, system in systems:
        if args.c is not None:
            _apply_overrides(system, args.c, False)
        rep = check_counting_bound(system)
        worst_ratio = max(worst_ratio, rep.count / rep.bound if rep.bound else 0.0)
        if not rep.ok:
            sizes = " ".join(f"{s}:{c}" for s, c in rep.by_size)
            print(f"counting FAILED on {label}: {rep.count} minimal members")
            print(f"by size {sizes or 'none'}; budget {rep.bound:.1f}")
            return 1
    print(
        f"checked {len(systems)} instances, worst census/budget ratio {worst_ratio:.3f}"
    )
    print("counting ok")
    return 0


def _parse_range(text: str) -> range:
    lo, _, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError("range end below start")
    return range(a, b + 1)


def _never_yes_instance(n: int) -> HittingSetInstance:
    """Hitting set over n singletons: the only member is the full universe,
    so every budget below n answers No and every plan runs to the end."""
    return HittingSetInstance(
        UniverseInfo(n), tuple(ElementSet(1 << i) for i in range(n))
    )


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)

    if args.suite == "schedule":
        # measured repetitions must equal the plan exactly, per k'
        all_match = True
        for n in args.n_range:
            system = _never_yes_instance(n)
            k = n - 1
            res = randomized_search(system, k, seed=seed)
            planned = [(p.k_prime, p.repetitions) for p in res.schedule.plans]
            match = list(res.reps_executed) == planned
            all_match &= match
            total = sum(r for _, r in res.reps_executed)
            print(
                f"n={n:<3} k={k:<3} plans {len(planned):<3} "
                f"executed reps {total:<8} match {'yes' if match else 'NO'}"
            )
            if not match:
                for (kp, want), (_, got) in zip(planned, res.reps_executed):
                    if want != got:
                        print(f"  k'={kp}: planned {want}, measured {got}")
        print("schedule ok" if all_match else "schedule MISMATCH")
        return 0 if all_match else 1

    if args.suite == "kernels":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        instances = [
            random_hitting_set(args.n, 3 * args.n, 3, rng) for _ in range(args.trials)
        ]
        k = max(2, args.n // 3)
        rows = []
        for name, mod in kernels.implementations():
            batches = [
                (
                    inst._sets_arr,
                    np.zeros(64, dtype=np.uint64),
                    np.full(64, k, dtype=np.int64),
                )
                for inst in instances
            ]
            mod.hs_extend_batch(*batches[0], False)  # warm the JIT cache
            start = time.perf_counter()
            for sets_arr, bases, budgets in batches:
                mod.hs_extend_batch(sets_arr, bases, budgets, False)
            rows.append((name, time.perf_counter() - start))
        base_time = dict(rows).get("python", rows[0][1])
        print(f"hitting-set extension, n={args.n}, {args.trials} instances x 64 queries, k={k}")
        for name, secs in rows:
            print(f"{name:<8} {secs:8.3f}s  x{base_time / secs:.1f}")
        return 0

    # rates: growth of full-sweep deterministic work on random tournaments
    cache = default_cache()
    rate = 2.0 - 1.0 / 3.0  # tournament oracle branches on triangles
    xs, ys, means = [], [], []
    print(f"full-sweep extension calls on random tournaments, {args.trials} per n")
    for n in args.n_range:
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(n,)))
        )
        calls = []
        for _ in range(args.trials):
            system = random_tournament(n, rng)
            res = deterministic_search(
                system, n, families=cache, stop_at_first=False
            )
            calls.append(res.oracle_calls)
        mean = float(np.mean(calls))
        xs.append(n)
        ys.append(np.log2(mean))
        means.append(mean)
        print(f"n={n:<3} mean calls {mean:12.1f}  log2 {ys[-1]:.3f}")
    if len(xs) >= 2:
        slope = float(np.polyfit(xs, ys, 1)[0])
        print(f"slope {slope:.3f} per element (rate base 5/3 -> {np.log2(5 / 3):.3f})")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "calls", "predicted"])
            for n, mean in zip(xs, means):
                predicted = means[0] * rate ** (n - xs[0])
                writer.writerow([n, f"{mean:.1f}", f"{predicted:.1f}"])
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlsearch",
        description="Budgeted search and enumeration over implicit set systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide a budget or minimize")
    solve.add_argument("--problem", choices=PROBLEM_NAMES, required=True)
    solve.add_argument("--in", dest="infile", required=True, help="instance file, - for stdin")
    group = solve.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="budget to decide")
    group.add_argument("--minimize", action="store_true", help="find the smallest Yes budget")
    solve.add_argument("--mode", choices=("rand", "det"), default="rand")
    solve.add_argument("--seed", type=int, default=None, help="drawn and printed when absent")
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--c", metavar="BASE", help="hypothetical oracle base, e.g. 2.562")
    solve.add_argument("--permissive", action="store_true", help="decision-only oracle contract")
    solve.add_argument("--json", action="store_true")
    solve.set_defaults(func=_cmd_solve)

    enum = sub.add_parser("enumerate", help="list all minimal members")
    enum.add_argument("--problem", choices=PROBLEM_NAMES, required=True)
    enum.add_argument("--in", dest="infile", required=True)
    enum.add_argument("--max-size", type=int, default=None)
    enum.add_argument("--mode", choices=("det", "rand"), default="det")
    enum.add_argument("--seed", type=int, default=None)
    enum.add_argument("--names", action="store_true", help="print element names, not masks")
    enum.add_argument("--json", action="store_true")
    enum.set_defaults(func=_cmd_enumerate)

    fam = sub.add_parser("family", help="build a subset-cover family")
    fam.add_argument("--n", type=int, required=True)
    fam.add_argument("--p", type=int, required=True)
    fam.add_argument("--q", type=int, required=True)
    fam.add_argument("--construction", choices=("auto", "greedy", "bucketed"), default="auto")
    fam.add_argument("--out", default=None, help="write here instead of stdout")
    fam.set_defaults(func=_cmd_family)

    ver = sub.add_parser("verify", help="check covering, uniformity, or counting")
    ver.add_argument("check", choices=("covering", "uniformity", "counting"))
    ver.add_argument("--problem", choices=PROBLEM_NAMES)
    ver.add_argument("--in", dest="infile", help="instance or family file")
    ver.add_argument("--n", type=int)
    ver.add_argument("--p", type=int)
    ver.add_argument("--q", type=int)
    ver.add_argument("--construction", choices=("auto", "greedy", "bucketed"), default="auto")
    ver.add_argument("--samples", type=int, default=None, help="sample instead of exhausting")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--max-k", type=int, default=None)
    ver.add_argument("--n-max", type=int, default=None, help="sweep random instances up to n")
    ver.add_argument("--trials", type=int, default=20, help="random instances per n in sweeps")
    ver.add_argument("--c", metavar="BASE", default=None, help="override the counting rate base")
    ver.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="measure rates, schedules, or kernels")
    bench.add_argument("--suite", choices=("rates", "schedule", "kernels"), required=True)
    bench.add_argument("--n-range", type=_parse_range, default=range(10, 15))
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--n", type=int, default=24, help="universe size for the kernels suite")
    bench.add_argument("--out", default=None, help="write the rates CSV here")
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MlsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
