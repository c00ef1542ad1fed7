"""ramlab command line.

Every command builds a report dict; ``--json`` prints it as schema v1,
otherwise a short text rendering is shown.  Configuration precedence:
flags > RAMLAB_SEED / RAMLAB_CACHE > TOML file (--config) > defaults.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import __version__
from .errors import RamlabError, ParseError, InvalidArgs
from .presentation import RamificationType, build_model, graded_dims, model_dump
from .bounds import bounds_report, kurosh_rank
from .arith.fields import (
    MultiquadFieldSpec, CyclicFieldSpec, analyze_multiquad, analyze_cyclic,
)
from .arith.bqf import bqf_narrow_class_group
from .arith.search import find_primes_lb_cyclic, PrimeSearchCache, CASES, DEFAULT_CAP
from .arith.vst import vst_dimension
from .checks import CHECKS, ACCEPTANCE, run_check, quadratic_prediction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA = "ramlab.report/v1"
DEFAULTS = {"seed": 0, "cache": None}


# --- configuration ---------------------------------------------------------------------

def load_config(path):
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ParseError(f"cannot read config {path}: {e}")
    return data.get("ramlab", data)


def resolve(flag, env_name, config, key, cast=str):
    if flag is not None:
        return flag
    if os.environ.get(env_name):
        return cast(os.environ[env_name])
    if key in config:
        return cast(config[key])
    return DEFAULTS[key]


# --- parsing ---------------------------------------------------------------------------

def _ints(text, sep=","):
    try:
        return [int(x) for x in text.split(sep) if x.strip()]
    except ValueError:
        raise ParseError(f"expected integers separated by {sep!r}: {text!r}")


def _keyvals(text):
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _need(kv, *keys):
    missing = [k for k in keys if k not in kv]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")


def _bitvec(s, d):
    if len(s) != d or set(s) - {"0", "1"}:
        raise ParseError(f"{s!r} is not a 0/1 vector of length {d}")
    return tuple(int(c) for c in s)


def parse_cyclic_field(text):
    """p=3,d=2,primes=19:2,7:1  (each prime l:m meaning |I_l| = p^m)."""
    head, _, prim = text.partition("primes=")
    kv = _keyvals(head)
    _need(kv, "p", "d")
    comps = []
    for part in prim.split(","):
        if not part.strip():
            continue
        l, _, m = part.partition(":")
        try:
            comps.append((int(l), int(m or kv["d"])))
        except ValueError:
            raise ParseError(f"bad prime entry {part!r}")
    if not comps:
        raise ParseError("primes=l:m,... is required")
    return CyclicFieldSpec(int(kv["p"]), int(kv["d"]), tuple(comps))


def parse_multiquad_type(text):
    """d=2,n=3,inertia=10:01:11,arch=11  (inertia defaults to the standard basis)."""
    kv = _keyvals(text)
    _need(kv, "d")
    d = int(kv["d"])
    if "inertia" in kv:
        vecs = [_bitvec(s, d) for s in kv["inertia"].split(":")]
    else:
        vecs = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    if "n" in kv and int(kv["n"]) != len(vecs):
        raise ParseError(f"n = {kv['n']} but {len(vecs)} inertia vectors given")
    arch = _bitvec(kv["arch"], d) if kv.get("arch") else None
    return RamificationType(RamificationType.standard_multiquad(d).gamma, tuple(vecs), arch)


def parse_cyclic_type(text):
    """p=3,d=2,orders=9:3:3,imaginary=1."""
    kv = _keyvals(text)
    _need(kv, "p", "d", "orders")
    return RamificationType.cyclic(int(kv["p"]), int(kv["d"]), _ints(kv["orders"], ":"),
                                   imaginary=kv.get("imaginary", "0") in ("1", "true", "yes"))


def _type_from(multiquad_type, cyclic_type):
    if bool(multiquad_type) == bool(cyclic_type):
        raise ParseError("give exactly one of --multiquad-type and --cyclic-type")
    if multiquad_type:
        return parse_multiquad_type(multiquad_type)
    return parse_cyclic_type(cyclic_type)


# --- report plumbing ---------------------------------------------------------------------

def make_report(command, inputs, result, seed=None, warnings=()):
    return {"schema": SCHEMA, "version": __version__, "command": command,
            "inputs": inputs, "seed": seed, "result": result, "warnings": list(warnings)}


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x))
               for x in items)


def _scalar(v):
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_scalar(x)}" for k, x in v.items())
    if v is None:
        return "-"
    return str(v)


def emit(ctx, report):
    if ctx.obj["json"]:
        click.echo(json.dumps(report, indent=2))
        return
    if report.get("seed") is not None:
        click.echo(f"seed: {report['seed']}")
    for w in report["warnings"]:
        click.echo(f"warning: {w}")
    click.echo("\n".join(_text(report["result"])))


class RamlabGroup(click.Group):
    """Turns library errors into exit code 2 with the error code."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except RamlabError as e:
            click.echo(f"error [{e.code}]: {e}", err=True)
            ctx.exit(2)


@click.group(cls=RamlabGroup)
@click.version_option(__version__, prog_name="ramlab")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report (schema v1).")
@click.option("--config", type=click.Path(dir_okay=False), help="TOML configuration file.")
@click.option("--seed", type=int, default=None, help="Seed for randomized checks.")
@click.option("--cache", type=click.Path(dir_okay=False), default=None,
              help="JSON-lines cache for prime searches.")
@click.pass_context
def cli(ctx, as_json, config, seed, cache):
    """Ramification-type presentations, rank bounds and their checks."""
    conf = load_config(config)
    ctx.obj = {
        "json": as_json or bool(conf.get("json", False)),
        "seed": resolve(seed, "RAMLAB_SEED", conf, "seed", int),
        "cache": resolve(cache, "RAMLAB_CACHE", conf, "cache"),
    }


# --- commands ------------------------------------------------------------------------

def _multiquad_analysis(gens):
    a = analyze_multiquad(MultiquadFieldSpec.from_generators(gens))
    t = a.type
    out = {"field": a.spec.as_dict(), "primes": list(a.primes), "type": t.as_dict(),
           "bounds": bounds_report(t).as_dict(), "frobenius": a.table()}
    if a.d == 1:
        D = a.quadratic_discriminant()
        cg = bqf_narrow_class_group(D)
        pred = quadratic_prediction(D)
        out["oracle"] = {"D": D, "narrow_rank": cg.narrow_rank(2),
                         "ordinary_rank": cg.ordinary_rank(2),
                         "narrow_invariants": list(cg.narrow_invariants),
                         "ordinary_invariants": list(cg.ordinary_invariants)}
        out["predicted"] = {"narrow_rank": pred["narrow"], "ordinary_rank": pred["ordinary"],
                            "x_inf": pred["x_inf"]}
    return out


def _cyclic_analysis(spec):
    a = analyze_cyclic(spec)
    out = {"field": spec.as_dict(), "real": a.is_real, "type": a.type.as_dict(),
           "bounds": bounds_report(a.type).as_dict(), "frobenius": a.table()}
    if spec.order == 2:
        D = a.quadratic_discriminant()
        cg = bqf_narrow_class_group(D)
        out["oracle"] = {"D": D, "narrow_rank": cg.narrow_rank(2),
                         "ordinary_rank": cg.ordinary_rank(2)}
    return out


@cli.command()
@click.option("--multiquad", help="Comma-separated squarefree generators, e.g. 5,13.")
@click.option("--cyclic", help="p=..,d=..,primes=l:m,... for a cyclic p^d field.")
@click.pass_context
def analyze(ctx, multiquad, cyclic):
    """Ramification type, bounds and Frobenius table of a field."""
    if bool(multiquad) == bool(cyclic):
        raise ParseError("give exactly one of --multiquad and --cyclic")
    if multiquad:
        result = _multiquad_analysis(_ints(multiquad))
        inputs = {"multiquad": _ints(multiquad)}
    else:
        spec = parse_cyclic_field(cyclic)
        result = _cyclic_analysis(spec)
        inputs = {"cyclic": spec.as_dict()}
    emit(ctx, make_report("analyze", inputs, result))


@cli.command()
@click.option("--multiquad-type", help="d=..,n=..,inertia=10:01:11,arch=11")
@click.option("--cyclic-type", help="p=..,d=..,orders=9:3:3,imaginary=1")
@click.pass_context
def bounds(ctx, multiquad_type, cyclic_type):
    """Every applicable bound for a ramification type."""
    t = _type_from(multiquad_type, cyclic_type)
    warnings = []
    model = None
    try:
        model = build_model(t)
    except RamlabError as e:
        warnings.append(f"no model for nu: {e}")
    rep = bounds_report(t, model)
    emit(ctx, make_report("bounds", {"type": t.as_dict()}, rep.as_dict(), warnings=warnings))


def presentation_summary(t):
    model = build_model(t)
    n = t.n
    gens = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    relators = [f"x{i + 1}^{o}" for i, o in enumerate(t.inertia_orders)]
    relators += [f"[x{i + 1}, y{i + 1}]" for i in range(n)]
    if t.arch is not None:
        gens.append("x_inf")
        relators.append("x_inf^2")
    out = {"type": t.as_dict(), "generators": gens, "relators": relators,
           "N_dim": model.N_dim, "kurosh": kurosh_rank(t)}
    if t.is_multiquad:
        out["graded_dims"] = list(graded_dims(model))
    return out


@cli.command()
@click.option("--multiquad-type", help="d=..,n=..,inertia=10:01:11,arch=11")
@click.option("--cyclic-type", help="p=..,d=..,orders=9:3:3,imaginary=1")
@click.option("--dump", "dump_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the full model (ramlab.model/1) to this file.")
@click.pass_context
def present(ctx, multiquad_type, cyclic_type, dump_path):
    """Generators, relator shapes and graded dimensions of the model."""
    t = _type_from(multiquad_type, cyclic_type)
    summary = presentation_summary(t)
    if dump_path:
        with open(dump_path, "w") as fh:
            json.dump(model_dump(build_model(t)), fh, indent=2)
            fh.write("\n")
        summary["dump"] = dump_path
    emit(ctx, make_report("present", {"type": t.as_dict()}, summary))


@cli.command()
@click.argument("check_id")
@click.option("--n", type=int, default=None, help="Size parameter for checks that take one.")
@click.pass_context
def verify(ctx, check_id, n):
    """Run a named check, or 'all' / 'acceptance'."""
    seed = ctx.obj["seed"]
    cache = PrimeSearchCache(ctx.obj["cache"]) if ctx.obj["cache"] else None
    if check_id == "all":
        ids = list(CHECKS)
    elif check_id == "acceptance":
        ids = ACCEPTANCE
    else:
        ids = [check_id]
    results = [run_check(c, n=n, seed=seed, cache=cache) for c in ids]
    failed = [r["id"] for r in results if not r["pass"]]
    result = results[0] if len(results) == 1 else {
        "summary": [{"id": r["id"], "pass": r["pass"], "runtime": r["runtime"]}
                    for r in results]}
    emit(ctx, make_report("verify", {"check": check_id, "n": n}, result, seed=seed))
    if failed:
        click.echo("FAILED: " + ", ".join(failed), err=True)
        ctx.exit(1)


@cli.command("search-primes")
@click.option("--p", "p", type=int, required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--case", type=click.Choice(CASES), default=None,
              help="Defaults to OddP for odd p; required for p = 2.")
@click.option("--orders", default=None, help="Inertia orders, e.g. 9:3:3.")
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@click.option("--relaxed", is_flag=True, help="Drop l_1 from the p-th power condition.")
@click.pass_context
def search_primes(ctx, p, d, n, case, orders, cap, relaxed):
    """Smallest-first prime tuple for the cyclic lower-bound construction."""
    if case is None:
        if p == 2:
            raise InvalidArgs("--case II.1 or II.2 is required for p = 2")
        case = "OddP"
    orders = _ints(orders, ":") if orders else None
    cache = PrimeSearchCache(ctx.obj["cache"]) if ctx.obj["cache"] else None
    primes = find_primes_lb_cyclic(p, d, n, case, orders, cap, relaxed, cache)
    inputs = {"p": p, "d": d, "n": n, "case": case, "orders": orders, "cap": cap,
              "relaxed": relaxed}
    result = {"primes": primes}
    if p == 2 and d == 1:
        D = 1
        for l in primes:
            D *= l if l % 4 == 1 else -l
        cg = bqf_narrow_class_group(D)
        result.update({"D": D, "narrow_rank": cg.narrow_rank(2),
                       "ordinary_rank": cg.ordinary_rank(2)})
    emit(ctx, make_report("search-primes", inputs, result))


def _places(text):
    return [x.strip() for x in (text or "").split(",") if x.strip()]


@cli.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--S", "S", default="", help="Comma-separated places, e.g. inf,3.")
@click.option("--T", "T", default="", help="Comma-separated places.")
@click.pass_context
def vst(ctx, p, S, T):
    """Dimension of V_S^T over Q."""
    S, T = _places(S), _places(T)
    dim = vst_dimension(S, T, p)
    emit(ctx, make_report("vst", {"p": p, "S": S, "T": T}, {"dim": dim}))


@cli.command(context_settings={"ignore_unknown_options": True})
@click.argument("D", type=int)
@click.pass_context
def oracle(ctx, d):
    """Narrow and ordinary class groups of Q(sqrt D) from binary quadratic forms."""
    cg = bqf_narrow_class_group(d)
    result = cg.as_dict()
    result["narrow_rank_2"] = cg.narrow_rank(2)
    result["ordinary_rank_2"] = cg.ordinary_rank(2)
    emit(ctx, make_report("oracle", {"D": d}, result))


def main(argv=None):
    cli.main(args=argv, prog_name="ramlab")


if __name__ == "__main__":
    main()
