"""Command line front end: parse presentations, run one computation, emit a report.

Exit status 0 when every requested check passes, 1 when a mathematical check
fails (the report is still written) and 2 on parse or schema errors (nothing
is written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

from . import koszul as K
from .coalg import (CoalgebraError, antipode_report, check_coalgebra, check_comodule,
                    coalgebra_from_json, coalgebra_to_json, cofree_comodule, trivial_comodule)
from .dgcat import (IdentityBimodule, PresentationError, bundle_from_document, category_to_json, content_hash,
                    validate_category, validate_functor, validate_monoidal)
from .gradedlinalg import (ComplexError, FieldError, FieldSpec, check_complex, cohomology, complex_from_json,
                           complex_to_json)
from .hochschild import HochschildError, hochschild_total, normalised_top
from .tannaka import (TannakaError, check_involution, check_universal_comonoid, counit_check,
                      counit_contraction_check, involution, monoidal_assembly, monoidal_bialgebra,
                      tannakian_dual, tilting_module, universal_coalgebra)

SIGN_CONVENTION = "dgtannaka-signs/1"

COMMANDS = ("validate", "hochschild", "tannaka-dual", "universal-coalgebra", "tilting", "counit-check", "bar",
            "cobar", "koszul-check", "bialgebra", "antipode-check", "cohomology")

PARSE_ERRORS = (PresentationError, FieldError, ComplexError, CoalgebraError, json.JSONDecodeError, OSError)


class JobError(ValueError):
    """A job that cannot run on the given inputs (schema level)."""


class InvalidInput(ValueError):
    """The presentation parsed but fails its axioms; carries the report."""

    def __init__(self, report: dict):
        super().__init__("invalid presentation")
        self.report = report


@dataclass
class JobSpec:
    command: str
    inputs: list
    max_level: int | None = None
    window: tuple | None = None
    depth: int | None = None
    normalised: bool = False
    field: str | None = None
    format: str = "json"
    out: str | None = None

    def check(self):
        if self.command not in COMMANDS:
            raise JobError(f"unknown command {self.command!r}")
        if not self.inputs:
            raise JobError("no input file")
        if self.max_level is not None and self.max_level < 0:
            raise JobError("--max-level must be >= 0")
        if self.depth is not None and self.depth < 0:
            raise JobError("--depth must be >= 0")
        if self.window is not None and self.window[0] > self.window[1]:
            raise JobError("--window needs lo <= hi")
        if self.format not in ("json", "text"):
            raise JobError("--format is json or text")


# ---------------------------------------------------------------- helpers


def _load(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise PresentationError(f"{path}: a document must be a JSON object")
    return doc


def _override_field(docs: list, field: str | None) -> list:
    """Apply --field to the main document; a functor file is bound to the category as written."""
    if field is None:
        return docs
    main = dict(docs[0])
    main["field"] = FieldSpec.from_json(field).to_json()
    rest = []
    for d in docs[1:]:
        want = d.get("category_sha256")
        if want and want != content_hash({k: v for k, v in docs[0].items() if k not in ("fibre_functor", "monoidal")}):
            raise PresentationError("functor file refers to a different category (hash mismatch)")
        rest.append({k: v for k, v in d.items() if k != "category_sha256"})
    return [main] + rest


def _is_complex(doc) -> bool:
    return "basis" in doc and "morphisms" not in doc and "delta" not in doc


def _is_coalgebra(doc) -> bool:
    return "delta" in doc


def _cohomology_json(cx, degrees) -> dict:
    h = cohomology(cx, degrees)
    return {str(n): h.dims[n] for n in degrees}


def _degrees(cx, window=None, trusted=None) -> list:
    sup = cx.support()
    if not sup:
        return []
    lo, hi = min(sup) - 1, max(sup) + 1
    if window is not None:
        lo, hi = window
    return [j for j in range(lo, hi + 1) if trusted is None or j in trusted]


def _msgs(rep) -> list:
    return [r if isinstance(r, str) else repr(r) for r in rep]


def _bundle(docs):
    b = bundle_from_document(docs[0], docs[1] if len(docs) > 1 else None)
    rep = _msgs(validate_category(b.category))
    if rep:
        raise InvalidInput({"category": rep})
    return b


def _need_functor(b):
    if b.functor is None:
        raise JobError("this command needs a fibre functor in the presentation")
    return b.functor


def _need_monoidal(b):
    if b.monoidal is None:
        raise JobError("this command needs monoidal data in the presentation")
    return b.monoidal


def _runs_out(A) -> bool:
    """Composable chains of non-identity generators have bounded length."""
    return normalised_top(A, A.nonidentity()) is not None


def _level(job, default: int = 4) -> int:
    return default if job.max_level is None else job.max_level


# ---------------------------------------------------------------- commands


def cmd_validate(job, docs):
    out = {}
    if _is_complex(docs[0]):
        cx = complex_from_json(docs[0])
        out["complex"] = _msgs(check_complex(cx))
        return out, not out["complex"]
    if _is_coalgebra(docs[0]):
        out["coalgebra"] = _msgs(check_coalgebra(coalgebra_from_json(docs[0])))
        return out, not out["coalgebra"]
    b = bundle_from_document(docs[0])
    out["category"] = _msgs(validate_category(b.category))
    if b.functor is not None and not out["category"]:
        out["fibre_functor"] = _msgs(validate_functor(b.functor))
    if b.monoidal is not None and not out["category"]:
        out["monoidal"] = _msgs(validate_monoidal(b.monoidal, b.functor))
    return out, not any(out.values())


def cmd_hochschild(job, docs):
    b = _bundle(docs)
    L = _level(job)
    tot, win = hochschild_total(b.category, IdentityBimodule(b.category), L, job.normalised)
    degs = _degrees(tot, job.window, win)
    bad = _msgs(check_complex(tot))
    return {"level_cutoff": L, "dims": {str(n): v for n, v in tot.dims().items()},
            "trusted_window": win.to_json(), "cohomology": _cohomology_json(tot, degs), "d_squared": bad}, not bad


def cmd_tannaka_dual(job, docs):
    b = _bundle(docs)
    omega = _need_functor(b)
    L = _level(job)
    C = tannakian_dual(b.category, omega, L, job.normalised)
    rep = _msgs(check_coalgebra(C))
    degs = _degrees(C.complex, job.window, C.window)
    return {"level_cutoff": L, "normalised": job.normalised, "dims": {str(n): v for n, v in C.complex.dims().items()},
            "trusted_window": C.window.to_json(), "cohomology": _cohomology_json(C.complex, degs),
            "axioms": rep, "coalgebra": coalgebra_to_json(C, C.render)}, not rep


def cmd_universal(job, docs):
    b = _bundle(docs)
    L = _level(job)
    D = universal_coalgebra(b.category, L)
    con = counit_contraction_check(D)
    como = _msgs(check_universal_comonoid(D))
    return {"level_cutoff": L, "dims": {str(n): v for n, v in D.model.complex.dims().items()},
            "contraction": {"verified_levels": con["verified_levels"], "checked": con["checked"],
                            "failures": con["failures"]},
            "comonoid": como}, con["ok"] and not como


def _cert_json(cert) -> dict:
    return cert.to_json()


def cmd_tilting(job, docs):
    b = _bundle(docs)
    omega = _need_functor(b)
    L = _level(job)
    t = tilting_module(b.category, omega, L, job.normalised, window=job.window)
    certs = {f"{k}({X})": _cert_json(c) for (k, X), c in sorted(t.certificates.items(), key=lambda kv: str(kv[0]))}
    rep = {"P": _msgs(check_comodule(t.P)), "Q": _msgs(check_comodule(t.Q))}
    ok = not rep["P"] and not rep["Q"] and all(c["verdict"] for c in certs.values())
    return {"level_cutoff": L, "dims": {"P": {str(n): v for n, v in t.P.complex.dims().items()},
                                        "Q": {str(n): v for n, v in t.Q.complex.dims().items()}},
            "coaction_axioms": rep, "augmentations": certs}, ok


def cmd_counit_check(job, docs):
    b = _bundle(docs)
    omega = _need_functor(b)
    L = _level(job, 3)
    depth = 2 if job.depth is None else job.depth
    window = job.window or (-2, 2)
    t = tilting_module(b.category, omega, L, nilpotence=_runs_out(b.category))
    g = [x for x in t.C.labels() if x[0] == 0][0]
    out = {}
    for name, N in (("k", trivial_comodule(t.C, g)), ("C", cofree_comodule(t.C))):
        out[name] = counit_check(N, t, depth, window).certificate.to_json()
    return {"certificates": out}, all(c["verdict"] for c in out.values())


def _positive(job, doc):
    b = _bundle([doc])
    return K.positive_algebra(b.category)


def cmd_bar(job, docs):
    P = _positive(job, docs[0])
    L = _level(job)
    B = K.bar_beta(P, L)
    rep = _msgs(K.check_conilpotent(B))
    tan = K.tangent_space(B)
    length_one = sorted(B.render(x) for x in B.labels() if len(x) == 1)
    tan_ok = len(tan) == len(length_one) and all(len(x) == 1 for v in tan for x in v)
    return {"level_cutoff": L, "dims": {str(n): v for n, v in B.complex.dims().items()},
            "axioms": rep, "tangent_space": length_one, "tangent_is_generators": tan_ok,
            "coalgebra": K.beta_to_json(B)}, not rep and tan_ok


def _conilpotent_from_doc(doc) -> K.ConilpotentCoalgebra:
    C = coalgebra_from_json(doc)
    if "grouplikes" not in doc:
        raise JobError("a coalgebra input needs a 'grouplikes' object {object: label}")
    w = doc.get("weights")
    return K.reduced_part(C, dict(doc["grouplikes"]), dict(w) if w else None)


def cmd_cobar(job, docs):
    L = _level(job)
    if _is_coalgebra(docs[0]):
        C = _conilpotent_from_doc(docs[0])
    else:
        C = K.bar_beta(_positive(job, docs[0]), L)
    B = K.cobar_beta_star(C, L)
    rep = _msgs(validate_category(B.cat))
    return {"level_cutoff": L, "source": C.name, "morphisms": len(B.cat.mor), "axioms": rep,
            "category": category_to_json(B.cat)}, not rep


def cmd_koszul_check(job, docs):
    L = _level(job, 3)
    out = {}
    if _is_coalgebra(docs[0]):
        C = _conilpotent_from_doc(docs[0])
        out["unit"] = K.unit_check(C, L, job.window or (0, 3)).to_json()
    else:
        P = _positive(job, docs[0])
        out["unit"] = K.unit_check(K.bar_beta(P, L), L, job.window or (0, 3)).to_json()
        out["counit"] = K.counit_check(P, L, job.window or (0, 4)).to_json()
    return {"certificates": out}, all(c["verdict"] for c in out.values())


def cmd_bialgebra(job, docs):
    b = _bundle(docs)
    omega = _need_functor(b)
    mon = _need_monoidal(b)
    L = _level(job)
    asm = monoidal_assembly(b.category, omega, mon, L, window=job.window or (-3, 0))
    rep = _msgs(asm.report)
    lax = {f"{m1}*{m2}": c.to_json() for (m1, m2), c in sorted(asm.lax.items())}
    return {"level_cutoff": L, "symmetric": mon.symmetric,
            "dims": {str(n): v for n, v in asm.bialgebra.complex.dims().items()},
            "axioms": rep, "lax_structure_maps": lax}, not rep and all(c["verdict"] for c in lax.values())


def cmd_antipode(job, docs):
    b = _bundle(docs)
    omega = _need_functor(b)
    mon = _need_monoidal(b)
    if not mon.dual_obj:
        raise JobError("antipode-check needs duals in the monoidal data")
    L = _level(job)
    B = monoidal_bialgebra(b.category, omega, mon, L, True)
    rho = involution(B, mon, omega)
    inv = _msgs(check_involution(B, rho))
    r = antipode_report(B, rho)
    return {"level_cutoff": L, "involution": inv,
            "chain_level": {"holds": not r["chain_level_failures"] and not r["undefined"],
                            "failures": [[B.render(x), side] for x, side in r["chain_level_failures"]],
                            "undefined": [B.render(x) for x in r["undefined"]]},
            "h0": {"dim": r["h0_dim"], "holds": r["h0_ok"], "failures": [f[0] for f in r["h0_failures"]]},
            "scope": "chain-level report; the identity is required on H^0 only"}, not inv and r["h0_ok"]


def cmd_cohomology(job, docs):
    if _is_complex(docs[0]):
        cx = complex_from_json(docs[0])
        bad = _msgs(check_complex(cx))
        if bad:
            return {"d_squared": bad}, False
        degs = _degrees(cx, job.window)
        return {"dims": {str(n): v for n, v in cx.dims().items()}, "cohomology": _cohomology_json(cx, degs)}, True
    b = _bundle(docs)
    omega = _need_functor(b)
    L = _level(job)
    C = tannakian_dual(b.category, omega, L, job.normalised)
    degs = _degrees(C.complex, job.window, C.window)
    return {"level_cutoff": L, "trusted_window": C.window.to_json(),
            "cohomology": _cohomology_json(C.complex, degs),
            "complex": complex_to_json(C.complex, C.render)}, True


DISPATCH = {
    "validate": cmd_validate,
    "hochschild": cmd_hochschild,
    "tannaka-dual": cmd_tannaka_dual,
    "universal-coalgebra": cmd_universal,
    "tilting": cmd_tilting,
    "counit-check": cmd_counit_check,
    "bar": cmd_bar,
    "cobar": cmd_cobar,
    "koszul-check": cmd_koszul_check,
    "bialgebra": cmd_bialgebra,
    "antipode-check": cmd_antipode,
    "cohomology": cmd_cohomology,
}


# ---------------------------------------------------------------- running


def run(job: JobSpec) -> tuple:
    """(exit status, rendered report or error message)."""
    try:
        job.check()
        raw = [_load(p) for p in job.inputs]
        docs = _override_field(raw, job.field)
    except (JobError, *PARSE_ERRORS) as e:
        return 2, f"error: {e}"
    params = {k: v for k, v in asdict(job).items() if k not in ("inputs", "out", "format", "command")}
    if params["window"] is not None:
        params["window"] = list(params["window"])
    report = {
        "command": job.command,
        "sign_convention": SIGN_CONVENTION,
        "inputs": [{"file": os.path.basename(p), "sha256": content_hash(d)} for p, d in zip(job.inputs, raw)],
        "parameters": params,
    }
    try:
        result, ok = DISPATCH[job.command](job, docs)
    except (JobError, *PARSE_ERRORS) as e:
        return 2, f"error: {e}"
    except InvalidInput as e:
        result, ok = {"error": "invalid presentation", "validation": e.report}, False
    except (TannakaError, K.KoszulError, HochschildError) as e:
        result, ok = {"error": str(e)}, False
    report["result"] = result
    report["ok"] = ok
    return (0 if ok else 1), render(report, job.format)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []
    for key in ("command", "sign_convention", "ok"):
        lines.append(f"{key}: {report[key]}")
    for inp in report["inputs"]:
        lines.append(f"input: {inp['file']} sha256={inp['sha256']}")
    lines.append("parameters: " + json.dumps(report["parameters"], sort_keys=True))
    for k in sorted(report["result"]):
        v = report["result"][k]
        if isinstance(v, dict) and ("basis" in v or "morphisms" in v):
            continue
        lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".dgtannaka-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgtannaka", description="Tannaka duals, bar/cobar and their checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("--max-level", type=int)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--depth", type=int)
    p.add_argument("--normalised", action="store_true")
    p.add_argument("--field", metavar="Q|Fp:p")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    job = JobSpec(a.command, list(a.inputs), a.max_level, tuple(a.window) if a.window else None, a.depth,
                  a.normalised, a.field, a.format, a.out)
    status, text = run(job)
    if status == 2:
        print(text, file=sys.stderr)
        return 2
    if job.out:
        _write_atomic(job.out, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
