"""Exception types shared across the geometry modules."""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for numerical-geometry failures (as opposed to usage bugs)."""


class SingularFrame(GeometryError):
    """The frame [f_x, f_y, f_z, C] is singular or too ill-conditioned to trust.

    Carries the offending point and the estimated condition number.
    """

    def __init__(self, point, cond):
        self.point = tuple(float(v) for v in point)
        self.cond = float(cond)
        super().__init__(
            f"frame singular or ill-conditioned at {self.point} (cond ~ {self.cond:.3e})"
        )


class NotJTangent(GeometryError):
    """J~C has a transversal component beyond tolerance, so no induced structure exists."""

    def __init__(self, defect, tol):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(
            f"transversal field is not J~-tangent: defect {self.defect:.3e} > tol {self.tol:.3e}"
        )


class DegenerateD(GeometryError):
    """The invariant tangent distribution is degenerate (not 2-dimensional)."""


class ZeroScale(GeometryError):
    """A transversal/structure change was requested with a zero scale function."""


class ZNotInD(GeometryError):
    """The tangent shift Z of a structure change must lie in the invariant distribution."""

    def __init__(self, eta_of_z):
        self.eta_of_z = float(eta_of_z)
        super().__init__(f"shift vector is not in the distribution: eta(Z) = {self.eta_of_z:.3e}")


class DegenerateCurveData(GeometryError):
    """Input curves violate a determinant condition required for an immersion.

    Carries the parameter value where the violation was detected.
    """

    def __init__(self, message, parameter):
        self.parameter = float(parameter)
        super().__init__(f"{message} (at parameter t = {self.parameter:.6g})")
