from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, model_validator

from ..Helper.Exceptions import DomainException


YOUNG_TOLERANCE = 1e-12


class ExponentTriple(BaseModel):
    """Exponents (p, q, r) tied by 1/p + 1/q = 1 + 1/r.

    The operator K_k maps L_p to L_r when the kernel lives in L_q (or its
    weak and Lorentz relatives). ``diagnostic`` marks the p = r = 2 mode
    used only by the Fourier symbol oracle, in which case q = 1.
    """

    model_config = ConfigDict(frozen=True)
    p: float
    q: float
    r: float
    diagnostic: bool = False

    @model_validator(mode="after")
    def check_young_condition(self) -> "ExponentTriple":
        defect = abs(1.0 / self.p + 1.0 / self.q - 1.0 - 1.0 / self.r)
        if defect > YOUNG_TOLERANCE:
            raise ValueError(
                "1/p + 1/q = 1 + 1/r violated by %.3e for (p, q, r) = (%s, %s, %s)"
                % (defect, self.p, self.q, self.r)
            )
        if self.diagnostic:
            if self.p != self.r or self.p <= 1:
                raise ValueError("diagnostic mode needs p = r > 1")
        elif not (1 < self.p < self.r < math.inf) or self.q <= 1:
            raise ValueError(
                "need 1 < p < r < inf and q > 1, got (%s, %s, %s)"
                % (self.p, self.q, self.r)
            )
        return self

    @staticmethod
    def make(p: float, r: float, diagnostic: bool = False) -> "ExponentTriple":
        """Solve the Young condition for q.

        Args:
            p (float): Domain exponent.
            r (float): Target exponent.
            diagnostic (bool, optional): Admit p = r (q = 1). Defaults to False.

        Raises:
            DomainException: If p <= 1, r is infinite or p >= r outside the
                diagnostic mode.
        """
        p, r = float(p), float(r)
        if not math.isfinite(p) or p <= 1:
            raise DomainException("1 < p", p)
        if not math.isfinite(r):
            raise DomainException("r < inf", r)
        if diagnostic:
            if p != r:
                raise DomainException("p = r in diagnostic mode", (p, r))
            return ExponentTriple(p=p, q=1.0, r=r, diagnostic=True)
        if p >= r:
            raise DomainException("p < r", (p, r))

        q = 1.0 / (1.0 + 1.0 / r - 1.0 / p)
        return ExponentTriple(p=p, q=q, r=r)

    @property
    def p_dual(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def r_dual(self) -> float:
        return self.r / (self.r - 1.0)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "p_dual": self.p_dual,
            "r_dual": self.r_dual,
            "diagnostic": self.diagnostic,
        }
