"""Command-line front end: `grasscat <subcommand> ...`.

Output is JSON (schema "grasscat/1") unless a TSV or DOT format is asked
for.  Exit status is 0 on success, 1 on usage errors and 2 on domain errors.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from grasscat import artube, configs, enumeration, oracle
from grasscat.errors import DomainError
from grasscat.profiles import (
    Profile,
    a_shift,
    branching_points,
    canonical_rotation,
    collapse,
    is_interlacing,
    is_three_boxes,
    profile_shift,
    quasi_boxes,
    rim_difference,
)
from grasscat.roots import format_coords, profile_root, profile_vector
from grasscat.subsets import KSubset, parse_subset

SCHEMA = "grasscat/1"
DEFAULT_SEED = 0


def _emit(payload: dict) -> None:
    click.echo(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))


def _kn(ctx: click.Context, text: str) -> tuple[int, int]:
    try:
        k, n = (int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected K,N, got {text!r}", param_hint="--kn")
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got k={k}, n={n}")
    if 2 * k > n and not ctx.obj.get("allow_large_k"):
        raise DomainError(f"k={k} exceeds n/2; pass --allow-large-k to override")
    return k, n


def _profile(text: str, k: int, n: int) -> Profile:
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise DomainError(f"bad profile JSON: {err}")
        P = Profile.from_json(data) if isinstance(data, dict) else Profile.of(n, data)
    else:
        P = Profile.parse(text, n)
    if P.n != n or P.k != k:
        raise DomainError(f"profile is over ({P.k},{P.n}), not ({k},{n})")
    return P


def _subset(text: str, k: int, n: int) -> KSubset:
    I = parse_subset(text, n)
    if I.k != k:
        raise DomainError(f"{I} has {I.k} labels, expected {k}")
    return I


def _seed(seeds: tuple[int, ...]) -> int:
    return seeds[0] if seeds else DEFAULT_SEED


@click.group()
@click.option("--allow-large-k", is_flag=True, help="Allow k > n/2.")
@click.pass_context
def cli(ctx: click.Context, allow_large_k: bool) -> None:
    """Profiles, roots and AR translates for Grassmannian cluster categories."""
    ctx.ensure_object(dict)
    ctx.obj["allow_large_k"] = allow_large_k


kn_option = click.option("--kn", required=True, help="K,N, e.g. 3,9.")
profile_option = click.option(
    "--profile", "profile_text", required=True, help="JSON rows, e.g. [[3,5,9],[2,5,8]], or 359|258."
)
seed_option = click.option("--seed", "seeds", multiple=True, type=int, help="Random seed (repeatable).")
prime_option = click.option("--prime", default=oracle.DEFAULT_PRIME, show_default=True, type=int)


@cli.command()
@kn_option
@profile_option
@click.pass_context
def root(ctx, kn, profile_text):
    """q-value, root type and simple-root expansion of a profile."""
    k, n = _kn(ctx, kn)
    P = _profile(profile_text, k, n)
    qv, rt, sc = profile_root(P)
    _emit(
        {
            "command": "root",
            "k": k,
            "n": n,
            "profile": str(P),
            "x": list(profile_vector(P).x),
            "q": str(qv),
            "type": str(rt),
            "coords": {"beta": sc.c_beta, "alpha": list(sc.c)},
            "phi": format_coords(sc),
        }
    )


@cli.command("classify-profile")
@kn_option
@profile_option
@click.option("--oracle", "use_oracle", is_flag=True, help="Also run the matrix oracle.")
@seed_option
@prime_option
@click.pass_context
def classify_profile(ctx, kn, profile_text, use_oracle, seeds, prime):
    """Root type, canonical rotation and configuration verdict of a profile."""
    k, n = _kn(ctx, kn)
    P = _profile(profile_text, k, n)
    qv, rt, sc = profile_root(P)
    rot = canonical_rotation(P)
    out = {
        "command": "classify-profile",
        "k": k,
        "n": n,
        "profile": str(P),
        "q": str(qv),
        "type": str(rt),
        "phi": format_coords(sc),
        "interlacing": is_interlacing(P),
        "canonical_rotation": str(rot) if rot else None,
        "seed": _seed(seeds),
    }
    if P.m >= 2:
        S = configs.simplify(configs.poset_from_profile(P))
        out["configuration"] = str(configs.generic_indecomposable(S))
    if P.m == 2 and P.rows[0] != P.rows[1]:
        out["three_boxes"] = is_three_boxes(*P.rows)
    if use_oracle:
        M = oracle.build_from_profile(P, _seed(seeds), prime)
        out["oracle"] = {
            "prime": prime,
            "indecomposable": oracle.is_indecomposable(M, seed=_seed(seeds)),
            "ext1_self": oracle.ext1(M, M),
        }
    _emit(out)


def _pair(ctx, kn, upper, lower):
    k, n = _kn(ctx, kn)
    return k, n, _subset(upper, k, n), _subset(lower, k, n)


@cli.command()
@kn_option
@click.option("--upper", required=True, help="Upper subset, e.g. 4,5,8,10.")
@click.option("--lower", required=True, help="Lower subset.")
@click.pass_context
def boxes(ctx, kn, upper, lower):
    """Quasi-boxes between two close-packed rims."""
    k, n, I, J = _pair(ctx, kn, upper, lower)
    qbs = quasi_boxes(I, J)
    _emit(
        {
            "command": "boxes",
            "k": k,
            "n": n,
            "gap": rim_difference(I, J),
            "branching_points": branching_points(I, J),
            "quasi_boxes": [
                {"arc": list(b.arc), "size": b.size, "cosize": b.cosize, "box": b.is_box} for b in qbs
            ],
            "count": len(qbs),
        }
    )


@cli.command("collapse")
@kn_option
@click.option("--upper", required=True)
@click.option("--lower", required=True)
@click.pass_context
def collapse_cmd(ctx, kn, upper, lower):
    """Remove common labels and common non-labels, then relabel."""
    k, n, I, J = _pair(ctx, kn, upper, lower)
    I2, J2 = collapse(I, J)
    _emit(
        {
            "command": "collapse",
            "k": I2.k,
            "n": I2.n,
            "upper": list(I2.elements),
            "lower": list(J2.elements),
        }
    )


@cli.command()
@kn_option
@profile_option
@click.option("--a", "amount", required=True, type=int, help="Shift amount.")
@click.option("--collapsed", is_flag=True, help="Rank 2 only: a-shift of the collapsed labels.")
@click.pass_context
def shift(ctx, kn, profile_text, amount, collapsed):
    """Add a constant to every label (or a-shift a rank-2 profile)."""
    k, n = _kn(ctx, kn)
    P = _profile(profile_text, k, n)
    if collapsed:
        if P.m != 2:
            raise DomainError("the collapsed a-shift needs a rank-2 profile")
        Q = Profile(n, a_shift(P.rows[0], P.rows[1], amount))
    else:
        Q = profile_shift(P, amount)
    _emit({"command": "shift", "k": k, "n": n, "profile": str(Q), "rows": Q.to_json()["rows"]})


@cli.command()
@kn_option
@profile_option
@seed_option
@prime_option
@click.pass_context
def tau(ctx, kn, profile_text, seeds, prime):
    """Profile of tau^{-1}(M), read from the syzygy and verified by isomorphism."""
    k, n = _kn(ctx, kn)
    P = _profile(profile_text, k, n)
    step = artube.tau_inverse_step(P, _seed(seeds), prime)
    if step.target is not None and not step.verified:
        raise DomainError(f"profile recovery failed: read {step.target}, not isomorphic")
    _emit(
        {
            "command": "tau",
            "k": k,
            "n": n,
            "profile": str(P),
            "tau_inverse": str(step.target) if step.target else None,
            "cover": list(step.cover),
            "seed": _seed(seeds),
            "prime": prime,
        }
    )


@cli.command()
@kn_option
@click.option("--subset", "subset_text", required=True, help="A 3-subset with three peaks.")
@click.option("--dual", is_flag=True, help="The sequence ending at L_I instead of starting there.")
@click.option("--split", "split_i", type=int, default=None, help="Splitting rule for I = {i, i+2, i+4}.")
@click.pass_context
def ar(ctx, kn, subset_text, dual, split_i):
    """Auslander-Reiten sequences with a rank-1 end term."""
    k, n = _kn(ctx, kn)
    I = _subset(subset_text, k, n)
    end, middle = artube.ar_sequence_end(I) if dual else artube.ar_sequence_start(I)
    out = {
        "command": "ar",
        "k": k,
        "n": n,
        "subset": str(I),
        "other_end": str(end),
        "middle": str(middle),
    }
    if split_i is not None:
        A, N = artube.ar_split_rule(split_i, n, dual)
        out["split"] = {"summand": str(A), "complement": str(N)}
    _emit(out)


@cli.command()
@kn_option
@click.option("--start", "start_text", required=True, help="Starting profile (JSON rows or 268|157).")
@click.option("--max-steps", default=64, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
@seed_option
@prime_option
@click.pass_context
def tube(ctx, kn, start_text, max_steps, fmt, seeds, prime):
    """Walk a tau-orbit until it closes."""
    k, n = _kn(ctx, kn)
    P = _profile(start_text, k, n)
    row = artube.tube_walk(P, max_steps, _seed(seeds), prime)
    if fmt == "dot":
        names = [str(Q) for Q in row.profiles]
        lines = ["digraph tube {", "  rankdir=LR;"]
        for a, b in zip(names, names[1:] + ([names[0]] if row.period else [])):
            lines.append(f'  "{a}" -> "{b}" [label="tau^-1"];')
        lines.append("}")
        click.echo("\n".join(lines))
        return
    _emit({"command": "tube", "k": k, "n": n, "seed": _seed(seeds), **row.to_json()})


def _oracle_row(args):
    text, seed = args
    P = Profile.parse(text, 9)
    verdicts = []
    for p in (oracle.DEFAULT_PRIME, oracle.SECOND_PRIME):
        M = oracle.build_from_profile(P, seed, p)
        verdicts.append(oracle.ext1(M, M) == 0 and oracle.is_indecomposable(M, seed=seed))
    return all(verdicts)


@cli.command()
@kn_option
@click.option("--count-only", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
@click.option("--tubes", is_flag=True, help="Label each profile by its tau-orbit (slow).")
@click.option("--verify-oracle", is_flag=True, help="Check rigidity and indecomposability at two primes.")
@click.option("--jobs", default=1, show_default=True, type=int)
@seed_option
@click.pass_context
def census(ctx, kn, count_only, fmt, tubes, verify_oracle, jobs, seeds):
    """The 225 rigid indecomposable rank-3 profiles of CM(B_{3,9})."""
    k, n = _kn(ctx, kn)
    if (k, n) != (3, 9):
        raise DomainError("the census is only available for (3,9)")
    entries = artube.census_39()
    if count_only:
        click.echo(len(entries))
        return
    seed = _seed(seeds)
    ids = artube.tube_ids([e.profile for e in entries], seed) if tubes else {}
    checks = None
    if verify_oracle:
        work = [(str(e.profile), seed) for e in entries]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                checks = list(pool.map(_oracle_row, work))
        else:
            checks = [_oracle_row(w) for w in work]
    rows = []
    for i, e in enumerate(entries):
        row = {
            "profile": str(e.profile),
            "q": str(e.q),
            "root_type": str(e.root_type),
            "tube_id": ids.get(e.profile, ""),
        }
        if checks is not None:
            row["rigid_indecomposable"] = checks[i]
        rows.append(row)
    if fmt == "json":
        _emit({"command": "census", "k": k, "n": n, "seed": seed, "count": len(rows), "rows": rows})
        return
    cols = ["profile", "q", "root_type", "tube_id"] + (["rigid_indecomposable"] if checks else [])
    click.echo(f"# seed={seed}")
    click.echo("\t".join(cols))
    for row in rows:
        click.echo("\t".join(str(row[c]) for c in cols))


@cli.command("enumerate")
@click.argument("kind", type=click.Choice(["rank2-boxes", "canonical", "imaginary"]))
@click.option("--k", "k", type=int, default=3, show_default=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, default=3, show_default=True)
@click.option("--count-only", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
@click.pass_context
def enumerate_cmd(ctx, kind, k, n, m, count_only, fmt):
    """Exhaustive profile generators."""
    _kn(ctx, f"{k},{n}")
    flags = None
    if kind == "rank2-boxes":
        if count_only:
            count = enumeration.count_three_box_rank2(k, n)
            _emit({"command": "enumerate", "kind": kind, "k": k, "n": n, "count": count, "formula": enumeration.n_kn(k, n)})
            return
        profiles = enumeration.enumerate_three_box_rank2(k, n)
    elif kind == "canonical":
        profiles = enumeration.enumerate_canonical_real(k, n, m)
    else:
        if k != 3:
            raise DomainError("the imaginary patterns are for k = 3")
        tagged = enumeration.enumerate_imaginary_rank3(n)
        profiles = [P for P, _ in tagged]
        flags = [rigid for _, rigid in tagged]
    if count_only:
        _emit({"command": "enumerate", "kind": kind, "k": k, "n": n, "count": len(profiles)})
        return
    if fmt == "json":
        rows = [str(P) for P in profiles]
        payload = {"command": "enumerate", "kind": kind, "k": k, "n": n, "count": len(rows), "profiles": rows}
        if flags is not None:
            payload["rigid_pattern"] = flags
        _emit(payload)
        return
    for i, P in enumerate(profiles):
        click.echo(str(P) if flags is None else f"{P}\t{'rigid' if flags[i] else 'non-rigid'}")


@cli.command("oracle-check")
@kn_option
@profile_option
@seed_option
@click.option("--trials", default=20, show_default=True, type=int)
@click.pass_context
def oracle_check(ctx, kn, profile_text, seeds, trials):
    """Build a module from a profile and test it at two primes."""
    k, n = _kn(ctx, kn)
    P = _profile(profile_text, k, n)
    seed_list = list(seeds) or [DEFAULT_SEED]
    results = []
    for p in (oracle.DEFAULT_PRIME, oracle.SECOND_PRIME):
        for seed in seed_list:
            M = oracle.build_from_profile(P, seed, p)
            results.append(
                {
                    "prime": p,
                    "seed": seed,
                    "read_profile": str(oracle.graded_profile(M)),
                    "indecomposable": oracle.is_indecomposable(M, trials, seed),
                    "ext1_self": oracle.ext1(M, M),
                    "cover": list(oracle.projective_cover_indices(M)),
                }
            )
    verdicts = {(r["indecomposable"], r["ext1_self"] == 0) for r in results}
    _emit(
        {
            "command": "oracle-check",
            "k": k,
            "n": n,
            "profile": str(P),
            "results": results,
            "primes_agree": len(verdicts) == 1,
        }
    )


def main(argv=None) -> int:
    """Entry point; returns the exit status instead of raising SystemExit."""
    try:
        rv = cli.main(args=argv, prog_name="grasscat", standalone_mode=False)
    except (click.ClickException, click.Abort) as err:
        if isinstance(err, click.ClickException):
            err.show()
        return 1
    except ValueError as err:  # DomainError and malformed labels
        click.echo(f"grasscat: error: {err}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
