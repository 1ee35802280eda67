"""Check records shared by the relation suites, the isogeny checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import RingElem


@dataclass
class Check:
    check: str
    params: dict = field(default_factory=dict)
    status: str = "pass"
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"check": self.check, "params": self.params, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def fmt_value(x):
    """JSON-friendly rendering of ring elements, matrices and containers."""
    if isinstance(x, RingElem):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): fmt_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt_value(v) for v in x]
    return x


def run_identity(name, params, trials, predicate) -> Check:
    """Evaluate ``predicate(args) -> bool`` on each argument dict in ``trials``.

    The first failing (or raising) argument dict becomes the witness.
    """
    count = 0
    for args in trials:
        count += 1
        try:
            ok = predicate(**args)
            err = None
        except Exception as exc:  # a crash is a failed identity, not a harness error
            ok, err = False, f"{type(exc).__name__}: {exc}"
        if not ok:
            witness = {k: fmt_value(v) for k, v in args.items()}
            if err:
                witness["error"] = err
            return Check(name, dict(params, evaluated=count), "fail", witness)
    return Check(name, dict(params, evaluated=count), "pass")


def all_pass(checks) -> bool:
    return all(c.ok for c in checks)
