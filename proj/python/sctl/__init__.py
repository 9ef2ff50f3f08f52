"""CTL with polyadic predicates over finite Kripke models.

Proof search by continuation passing tree rewriting, a fixpoint oracle,
and checkable certificates.
"""

from ._sctl import (
    Error,
    ExplicitModel,
    InputError,
    ModelError,
    PreconditionError,
    Program,
    ResourceError,
    TraceMismatch,
    bench,
    run_cli,
)

__all__ = [
    "Error",
    "ExplicitModel",
    "InputError",
    "ModelError",
    "PreconditionError",
    "Program",
    "ResourceError",
    "TraceMismatch",
    "bench",
    "run_cli",
    "check_file",
]


def check_file(path, engine="cpt", memo=True):
    """Verdict per spec of a model file, in file order."""
    prog = Program.load(path)
    return {name: prog.verify(name, engine=engine, memo=memo)["holds"] for name in prog.specs}
