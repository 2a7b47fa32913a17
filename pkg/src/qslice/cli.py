"""Command-line driver: ``qslice <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .cohomology import cohomology_dims
from .envelope import KazhdanIncompatible, verify_nu
from .pyramid import (
    InvalidPartition,
    Partition,
    enumerate_pyramids,
    grading_from_pyramid,
    partitions_of,
    sudim_of_degree,
)
from .structure import (
    NilpotentDatum,
    check_good,
    check_grading_properties,
    check_isotropic,
    isotropic_choice,
    mperp_decomposition,
)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class BadInput(ValueError):
    pass


@dataclass
class RunConfig:
    partition: tuple | None = None
    pyramid_index: tuple | None = None  # inclusive (lo, hi)
    isotropic_mode: str = "lagrangian"
    kmax: int = 6
    imax: int = 2
    kazhdan: str = "auto"
    output: str | None = None
    format: str = "json"
    workers: int = 1
    max_n: int = 3
    timing: bool = False

    def to_json(self) -> dict:
        return {
            "partition": list(self.partition) if self.partition else None,
            "pyramid_index": list(self.pyramid_index) if self.pyramid_index else None,
            "isotropic_mode": self.isotropic_mode,
            "kmax": self.kmax,
            "imax": self.imax,
            "kazhdan": self.kazhdan,
        }


def parse_index(text: str | None):
    if text is None:
        return None
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise BadInput(f"bad pyramid index {text!r}") from None
    if lo < 0 or hi < lo:
        raise BadInput(f"bad pyramid index range {text!r}")
    return lo, hi


def _indices(parts, rng) -> list[int]:
    count = len(enumerate_pyramids(Partition.of(parts)))
    if rng is None:
        return list(range(count))
    lo, hi = rng
    if hi >= count:
        raise BadInput(f"pyramid index {hi} out of range: {Partition.of(parts)} has {count} pyramids")
    return list(range(lo, hi + 1))


def _ms(t0, timing):
    return int((time.perf_counter() - t0) * 1000) if timing else None


# ---------------------------------------------------------------- per-case workers


def _setup(parts, idx, mode):
    P = enumerate_pyramids(Partition.of(parts))[idx]
    datum = NilpotentDatum.from_pyramid(P)
    return P, datum, isotropic_choice(datum, mode)


def walgebra_case(parts, idx, mode, kmax, kazhdan, timing=False) -> dict:
    t0 = time.perf_counter()
    _, datum, choice = _setup(parts, idx, mode)
    r = verify_nu(datum, choice, kmax, kazhdan)
    return {
        "partition": list(parts),
        "pyramid_index": idx,
        "isotropic_mode": mode,
        "kazhdan": r.kazhdan,
        "kmax": kmax,
        "dims_W": r.dims_W,
        "dims_CS_cumulative": r.dims_CS_cumulative,
        "dims_grQ": r.grQ_dims,
        "nu_verified": r.nu_verified,
        "grQ_verified": r.grQ_verified,
        "wall_time_ms": _ms(t0, timing),
    }


def cohomology_case(parts, idx, mode, kmax, imax, kazhdan, timing=False) -> dict:
    t0 = time.perf_counter()
    _, datum, choice = _setup(parts, idx, mode)
    r = cohomology_dims(datum, choice, kmax, imax, kazhdan)
    table = [{"i": i, "d": d, "dim": v} for (i, d), v in sorted(r.table.items())]
    return {
        "partition": list(parts),
        "pyramid_index": idx,
        "isotropic_mode": mode,
        "kazhdan": r.kazhdan,
        "imax": imax,
        "kmax": kmax,
        "table": table,
        "h0": r.h0,
        "slice_series": r.slice_series,
        "d_squared_zero": r.d_squared_zero,
        "vanishing_ok": r.vanishing_ok,
        "h0_matches_slice": r.h0_matches_slice,
        "wall_time_ms": _ms(t0, timing),
    }


def verify_case(args) -> dict:
    parts, idx, mode, kmax, imax, kazhdan, timing = args
    P, datum, choice = _setup(parts, idx, mode)
    good = check_good(datum.grading, datum.chi)
    props = check_grading_properties(datum)
    iso = check_isotropic(datum, choice)
    dec = mperp_decomposition(datum, choice, strict=False)
    wal = walgebra_case(parts, idx, mode, kmax, kazhdan, timing)
    coh = cohomology_case(parts, idx, mode, kmax, imax, kazhdan, timing)
    checks = [
        ("check_good", good.good and good.consistent),
        ("check_grading_properties", props.ok),
        ("check_isotropic", iso["ok"]),
        ("mperp_decomposition", dec.direct_sum),
        ("verify_nu", wal["nu_verified"] and wal["grQ_verified"]),
        ("cohomology_dims", coh["d_squared_zero"] and coh["vanishing_ok"] and coh["h0_matches_slice"]),
    ]
    failed = [name for name, ok in checks if not ok]
    return {
        "partition": list(parts),
        "pyramid_index": idx,
        "isotropic_mode": mode,
        "pyramid": P.to_json(),
        "goodness": {**good.to_json(), "good": good.good},
        "properties": {
            "injective_ok": props.injective_ok,
            "surjective_ok": props.surjective_ok,
            "sudim_gE": list(props.sudim_gE),
            "sudim_g0_plus_g1": list(props.sudim_g0_plus_g1),
        },
        "isotropic": {"sudims": {k: list(v) for k, v in choice.sudims().items()}, "ok": iso["ok"]},
        "decomposition": dec.to_json(),
        "walgebra": wal,
        "cohomology": coh,
        "passed": not failed,
        "first_failure": failed[0] if failed else None,
    }


# ---------------------------------------------------------------- commands


def cmd_pyramids(cfg: RunConfig) -> tuple[dict, bool]:
    lam = Partition.of(cfg.partition)
    cases = []
    for idx, P in enumerate(enumerate_pyramids(lam)):
        datum = NilpotentDatum.from_pyramid(P)
        good = check_good(datum.grading, datum.chi)
        cases.append({
            "index": idx,
            **P.to_json(),
            "degrees": datum.grading.support(),
            "good": good.good,
            "gl_good": good.gl_good,
            "diagram": P.diagram(),
        })
    return {"partition": list(lam.parts), "count": len(cases), "pyramids": cases}, all(c["good"] for c in cases)


def cmd_grading(cfg: RunConfig) -> tuple[dict, bool]:
    lam = Partition.of(cfg.partition)
    out = []
    for idx in _indices(lam.parts, cfg.pyramid_index):
        P = enumerate_pyramids(lam)[idx]
        G = grading_from_pyramid(P)
        datum = NilpotentDatum.from_pyramid(P)
        good = check_good(G, datum.chi)
        n = G.n
        out.append({
            "pyramid_index": idx,
            "cols": list(G.cols),
            "degree_matrix": [[G.degree(0, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)],
            "sudims": {str(j): list(sudim_of_degree(G, j)) for j in G.support()},
            "goodness": {**good.to_json(), "good": good.good},
        })
    return {"partition": list(lam.parts), "gradings": out}, all(g["goodness"]["good"] for g in out)


def _case_args(cfg: RunConfig, parts, modes):
    return [
        (tuple(parts), idx, mode, cfg.kmax, cfg.imax, cfg.kazhdan, cfg.timing)
        for idx in _indices(parts, cfg.pyramid_index)
        for mode in modes
    ]


def _run_cases(cfg: RunConfig, args: list) -> list[dict]:
    if cfg.workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            return list(ex.map(verify_case, args))
    return [verify_case(a) for a in args]


def _aggregate(cases):
    failed = [c for c in cases if not c["passed"]]
    first = None
    if failed:
        c = failed[0]
        first = f"{c['first_failure']} ({','.join(map(str, c['partition']))} #{c['pyramid_index']} {c['isotropic_mode']})"
    return {"cases": cases, "passed": not failed, "first_failure": first}, not failed


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    lam = Partition.of(cfg.partition)
    return _aggregate(_run_cases(cfg, _case_args(cfg, lam.parts, [cfg.isotropic_mode])))


def cmd_verify_all(cfg: RunConfig) -> tuple[dict, bool]:
    cfg = RunConfig(**{**cfg.__dict__, "pyramid_index": None})
    args = []
    for N in range(1, cfg.max_n + 1):
        for lam in partitions_of(N):
            args += _case_args(cfg, lam.parts, ["lagrangian", "zero"])
    rep, ok = _aggregate(_run_cases(cfg, args))
    rep["max_n"] = cfg.max_n
    return rep, ok


def cmd_walgebra(cfg: RunConfig) -> tuple[dict, bool]:
    lam = Partition.of(cfg.partition)
    reps = [
        walgebra_case(lam.parts, idx, cfg.isotropic_mode, cfg.kmax, cfg.kazhdan, cfg.timing)
        for idx in _indices(lam.parts, cfg.pyramid_index)
    ]
    return {"reports": reps}, all(r["nu_verified"] and r["grQ_verified"] for r in reps)


def cmd_cohomology(cfg: RunConfig) -> tuple[dict, bool]:
    lam = Partition.of(cfg.partition)
    reps = [
        cohomology_case(lam.parts, idx, cfg.isotropic_mode, cfg.kmax, cfg.imax, cfg.kazhdan, cfg.timing)
        for idx in _indices(lam.parts, cfg.pyramid_index)
    ]
    ok = all(r["vanishing_ok"] and r["h0_matches_slice"] and r["d_squared_zero"] for r in reps)
    return {"reports": reps}, ok


COMMANDS = {
    "pyramids": cmd_pyramids,
    "grading": cmd_grading,
    "verify": cmd_verify,
    "walgebra": cmd_walgebra,
    "cohomology": cmd_cohomology,
    "verify-all": cmd_verify_all,
}


# ---------------------------------------------------------------- text rendering


def _sd(v) -> str:
    return f"{v[0]}|{v[1]}"


def render_text(command: str, rep: dict) -> str:
    lines = []
    if command == "pyramids":
        lines.append(f"partition {','.join(map(str, rep['partition']))}: {rep['count']} pyramids")
        for p in rep["pyramids"]:
            lines.append(f"#{p['index']} left_edges={p['left_edges']} cols={p['cols']} good={p['good']}")
            lines += ["    " + row for row in p["diagram"].splitlines()]
    elif command == "grading":
        for g in rep["gradings"]:
            lines.append(f"#{g['pyramid_index']} cols={g['cols']} good={g['goodness']['good']}")
            for row in g["degree_matrix"]:
                lines.append("    " + " ".join(f"{x:3d}" for x in row))
            lines.append("    sudim: " + ", ".join(f"g_{j}={_sd(v)}" for j, v in g["sudims"].items()))
    elif command == "walgebra":
        for r in rep["reports"]:
            lines.append(
                f"{','.join(map(str, r['partition']))} #{r['pyramid_index']} {r['isotropic_mode']} ({r['kazhdan']}): "
                f"dims_W={r['dims_W']} C[S]={r['dims_CS_cumulative']} nu={'ok' if r['nu_verified'] else 'FAIL'}"
            )
    elif command == "cohomology":
        for r in rep["reports"]:
            lines.append(
                f"{','.join(map(str, r['partition']))} #{r['pyramid_index']} {r['isotropic_mode']}: "
                f"H0={r['h0']} vanishing={'ok' if r['vanishing_ok'] else 'FAIL'} "
                f"H0=C[S]: {'ok' if r['h0_matches_slice'] else 'FAIL'}"
            )
            for i in range(r["imax"] + 1):
                row = [e["dim"] for e in r["table"] if e["i"] == i]
                lines.append(f"    H^{i}: {row}")
    else:
        for c in rep["cases"]:
            w = c["walgebra"]
            lines.append(
                f"{'PASS' if c['passed'] else 'FAIL'} {','.join(map(str, c['partition']))} #{c['pyramid_index']} "
                f"{c['isotropic_mode']}: g_E={_sd(c['properties']['sudim_gE'])} "
                f"m_perp={_sd(c['decomposition']['lhs'])} dims_W={w['dims_W']}"
                + (f" first failure: {c['first_failure']}" if c["first_failure"] else "")
            )
        lines.append("all passed" if rep["passed"] else f"FAILED: {rep['first_failure']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qslice", description="Good gradings, W-superalgebras and slices for q(N).")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "verify-all":
            p.add_argument("--partition", required=True, help="comma separated parts, any order")
        else:
            p.add_argument("--max-n", type=int, default=3)
        p.add_argument("--pyramid-index", default=None, help="index or inclusive range a..b")
        p.add_argument("--isotropic-mode", choices=["lagrangian", "zero"], default="lagrangian")
        p.add_argument("--kmax", type=int, default=6)
        p.add_argument("--imax", type=int, default=2)
        p.add_argument("--kazhdan", choices=["auto", "sl2", "grading"], default="auto")
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--timing", action="store_true", help="record wall-clock times (breaks byte-identical output)")
    return ap


def config_from_args(ns) -> RunConfig:
    workers = ns.workers
    env = os.environ.get("QSLICE_WORKERS")
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise BadInput(f"QSLICE_WORKERS={env!r} is not an integer") from None
    if ns.kmax < 0 or ns.imax < 0:
        raise BadInput("kmax and imax must be non-negative")
    parts = None
    if getattr(ns, "partition", None) is not None:
        parts = Partition.parse(ns.partition).parts
    return RunConfig(
        partition=parts,
        pyramid_index=parse_index(ns.pyramid_index),
        isotropic_mode=ns.isotropic_mode,
        kmax=ns.kmax,
        imax=ns.imax,
        kazhdan=ns.kazhdan,
        output=ns.output,
        format=ns.format,
        workers=max(1, workers),
        max_n=getattr(ns, "max_n", 3),
        timing=ns.timing,
    )


def run(command: str, cfg: RunConfig) -> tuple[dict, bool]:
    body, ok = COMMANDS[command](cfg)
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.to_json(), **body}, ok


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = config_from_args(ns)
        rep, ok = run(ns.command, cfg)
    except (BadInput, InvalidPartition) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KazhdanIncompatible as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - reported as internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = json.dumps(rep, sort_keys=True, indent=2) + "\n" if cfg.format == "json" else render_text(ns.command, rep)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not ok:
        first = rep.get("first_failure") or "verification"
        print(f"verification failed: {first}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
