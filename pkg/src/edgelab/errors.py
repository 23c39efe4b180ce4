"""Exception types shared across the package."""


class EdgelabError(Exception):
    """Base class for domain errors raised by edgelab."""


class DegenerateGapless(EdgelabError):
    """Both detunings vanish (or epsilon = 0 at k = 0): the transfer spectrum
    degenerates onto the unit circle and no decaying direction exists."""


class NotAZeroMode(EdgelabError):
    """A constructed candidate fails the kernel residual test, usually because
    the coupling across the interface does not satisfy the matching condition."""


class NoMidGapState(EdgelabError):
    """A filtered supercell spectrum contains no state inside the bulk gap."""


class StepTooLarge(EdgelabError):
    """RK4 step violates dt * rho(H) <= 0.5."""


class NotConical(EdgelabError):
    """Degenerate-point fit is not linear/isotropic to the requested accuracy."""


class ConfigError(EdgelabError):
    """Invalid or unknown run-configuration values."""
