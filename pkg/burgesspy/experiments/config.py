import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..argument_utility import (
    HRuleArg,
    check_character_kind,
    check_h_rule,
    check_int_list,
    check_moduli_family,
    check_non_negative_int,
    check_positive_float,
    check_positive_int,
    check_q_range,
)
from ..context import DEFAULT_BUDGET
from ..errors import ConfigError, IoFailure
from ..h_rule import HRule
from ..logger import default_json_encoder


class ExperimentConfig:
    """Configuration of a sweep.

    .. code-block:: python

        from burgesspy.experiments import ExperimentConfig

        config = ExperimentConfig(
            moduli_family="primes",
            q_range=(1000, 100000),
            r=2,
            H_rule="q^{1/(2r)+0.3}",
            J=3,
        )

        # or from a json file holding the same field names
        config = ExperimentConfig.from_json("sweep.json")

    Args:
        moduli_family: ``primes``, ``prime_squares``, ``cube_free``,
            ``cube_full`` or ``explicit_list``.
        q_range: inclusive range the moduli are drawn from.
        characters_per_q: number of primitive characters sampled per
            modulus.
        r: moment parameter.
        H_rule: expression for ``H`` in terms of ``q`` and ``r``.
        J: size of the spaced families.
        seed: seed of every random choice.
        ratio_cap: ratios above this value are flagged.
        eps_slack: exponent slack standing in for epsilon.
        moduli: explicit moduli for ``explicit_list``.
        n_moduli: number of log-spaced moduli drawn from the family.
        character_indices: explicit character labels used for every
            modulus instead of sampling.
        character_kind: ``sampled`` draws random primitive characters,
            ``quadratic`` takes the Legendre symbol of prime moduli.
        points: explicit spaced family used instead of sampling.
        oracle: compare sextuple counts with the brute-force oracle for
            ``q <= 500``.
        budget: elementary operation budget per guarded call.

    """

    _moduli_family: str
    _q_range: Tuple[int, int]
    _characters_per_q: int
    _r: int
    _H_rule: HRule
    _J: int
    _seed: int
    _ratio_cap: float
    _eps_slack: float
    _moduli: Optional[List[int]]
    _n_moduli: int
    _character_indices: Optional[List[int]]
    _character_kind: str
    _points: Optional[List[int]]
    _oracle: bool
    _budget: int

    def __init__(
        self,
        moduli_family: str = "primes",
        q_range: Sequence[int] = (100, 1000),
        characters_per_q: int = 1,
        r: int = 2,
        H_rule: HRuleArg = "q^{1/(2r)+0.3}",
        J: int = 3,
        seed: int = 0,
        ratio_cap: float = 100.0,
        eps_slack: float = 0.25,
        moduli: Optional[Sequence[int]] = None,
        n_moduli: int = 5,
        character_indices: Optional[Sequence[int]] = None,
        character_kind: str = "sampled",
        points: Optional[Sequence[int]] = None,
        oracle: bool = False,
        budget: int = DEFAULT_BUDGET,
    ):
        self._moduli_family = check_moduli_family(moduli_family)
        self._q_range = check_q_range(q_range)
        self._characters_per_q = check_positive_int(
            "characters_per_q", characters_per_q
        )
        self._r = check_positive_int("r", r)
        self._H_rule = check_h_rule(H_rule)
        self._J = check_positive_int("J", J)
        self._seed = check_non_negative_int("seed", seed)
        self._ratio_cap = check_positive_float("ratio_cap", ratio_cap)
        is_number = isinstance(eps_slack, (int, float))
        if isinstance(eps_slack, bool) or not is_number:
            raise ConfigError("eps_slack must be a number.")
        self._eps_slack = float(eps_slack)
        self._moduli = check_int_list("moduli", moduli, minimum=2)
        self._n_moduli = check_positive_int("n_moduli", n_moduli)
        self._character_indices = check_int_list(
            "character_indices", character_indices
        )
        self._character_kind = check_character_kind(character_kind)
        self._points = check_int_list("points", points)
        self._oracle = bool(oracle)
        self._budget = check_positive_int("budget", budget)
        if self._moduli_family == "explicit_list" and not self._moduli:
            raise ConfigError("explicit_list needs a non-empty moduli list.")
        if self._points is not None and len(self._points) != self._J:
            raise ConfigError(
                "points has %d entries but J=%d."
                % (len(self._points), self._J)
            )

    @classmethod
    def from_dict(cls, params: Dict[str, Any]) -> "ExperimentConfig":
        unknown = set(params) - set(cls().get_params())
        if unknown:
            raise ConfigError("unknown config fields: %s." % sorted(unknown))
        return cls(**params)

    @classmethod
    def from_json(cls, fname: str) -> "ExperimentConfig":
        """Returns the configuration stored in a JSON file.

        Args:
            fname: path to a JSON object with ExperimentConfig field names.

        Returns:
            configuration.

        """
        try:
            with open(fname, "r") as f:
                params = json.load(f)
        except OSError as e:
            raise IoFailure("cannot read %s: %s" % (fname, e))
        except json.JSONDecodeError as e:
            raise ConfigError("%s is not valid JSON: %s" % (fname, e))
        if not isinstance(params, dict):
            raise ConfigError("%s must hold a JSON object." % fname)
        return cls.from_dict(params)

    def get_params(self) -> Dict[str, Any]:
        return {
            "moduli_family": self._moduli_family,
            "q_range": list(self._q_range),
            "characters_per_q": self._characters_per_q,
            "r": self._r,
            "H_rule": self._H_rule.text,
            "J": self._J,
            "seed": self._seed,
            "ratio_cap": self._ratio_cap,
            "eps_slack": self._eps_slack,
            "moduli": self._moduli,
            "n_moduli": self._n_moduli,
            "character_indices": self._character_indices,
            "character_kind": self._character_kind,
            "points": self._points,
            "oracle": self._oracle,
            "budget": self._budget,
        }

    def set_params(self, **params: Any) -> "ExperimentConfig":
        """Returns a copy with the given fields replaced."""
        merged = self.get_params()
        merged.update(params)
        return self.from_dict(merged)

    def save_json(self, fname: str) -> None:
        try:
            with open(fname, "w") as f:
                json.dump(
                    self.get_params(),
                    f,
                    default=default_json_encoder,
                    indent=2,
                )
        except OSError as e:
            raise IoFailure("cannot write %s: %s" % (fname, e))

    def H(self, q: int, r: Optional[int] = None) -> int:
        """Returns the interval length for modulus ``q``."""
        return self._H_rule(q, self._r if r is None else r)

    @property
    def moduli_family(self) -> str:
        return self._moduli_family

    @property
    def q_range(self) -> Tuple[int, int]:
        return self._q_range

    @property
    def characters_per_q(self) -> int:
        return self._characters_per_q

    @property
    def r(self) -> int:
        return self._r

    @property
    def H_rule(self) -> HRule:
        return self._H_rule

    @property
    def J(self) -> int:
        return self._J

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def ratio_cap(self) -> float:
        return self._ratio_cap

    @property
    def eps_slack(self) -> float:
        return self._eps_slack

    @property
    def moduli(self) -> Optional[List[int]]:
        return self._moduli

    @property
    def n_moduli(self) -> int:
        return self._n_moduli

    @property
    def character_indices(self) -> Optional[List[int]]:
        return self._character_indices

    @property
    def character_kind(self) -> str:
        return self._character_kind

    @property
    def points(self) -> Optional[List[int]]:
        return self._points

    @property
    def oracle(self) -> bool:
        return self._oracle

    @property
    def budget(self) -> int:
        return self._budget
