"""Exception types shared by every module."""


class TilingError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(TilingError, ValueError):
    """An input violates a construction's precondition."""


class BudgetExceeded(TilingError):
    """A materialization or search budget was exceeded.

    Kept distinct from :class:`Infeasible`: running out of budget says nothing
    about whether the requested object exists.
    """


class Infeasible(TilingError):
    """The requested object was shown (or searched and found) not to exist.

    ``certificate`` is a short machine-readable tag, ``detail`` is free text.
    Certificates in use:

    * ``"width"`` -- an antichain larger than the number of chains allowed.
    * ``"exhausted"`` -- a complete search found nothing.
    * ``"heuristic"`` -- a constructive heuristic failed; existence is open.
    * ``"size"`` -- some required chain is longer than the host allows.
    """

    def __init__(self, certificate: str, detail: str = ""):
        super().__init__(f"{certificate}: {detail}" if detail else certificate)
        self.certificate = certificate
        self.detail = detail

    @property
    def certified(self) -> bool:
        return self.certificate != "heuristic"


class Unsupported(TilingError):
    """The request needs a construction this package does not provide."""
