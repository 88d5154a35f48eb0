"""Closed occupation taxonomy for household survey records.

The taxonomy has exactly 14 codes; the five AG-prefixed codes are the
agricultural occupations. No other codes are constructible.
"""
from __future__ import annotations

from enum import Enum


class Occupation(str, Enum):
    STUDENT = "Student"
    AG_ANIMAL_FARMER = "AG-AnimalFarmer"
    AG_FARMER = "AG-Farmer"
    AG_FISHERY = "AG-Fishery"
    AG_ORCHARDIST = "AG-Orchardist"
    AG_PEASANT = "AG-Peasant"
    BUSINESS_OWNER = "Business-Owner"
    EM_COM_EMPLOYEE = "EM-ComEmployee"
    EM_COM_OFFICER = "EM-ComOfficer"
    EM_OFFICER = "EM-Officer"
    FREELANCE = "Freelance"
    MERCHANT = "Merchant"
    OTHERS = "Others"
    UNEMPLOYMENT = "Unemployment"

    @property
    def is_agricultural(self) -> bool:
        return self.value.startswith("AG-")

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


#: Exact-code lookup; free-text labels go through an alias map on top of this.
CODE_TO_OCCUPATION: dict[str, Occupation] = {o.value: o for o in Occupation}

AGRICULTURAL_OCCUPATIONS: frozenset[Occupation] = frozenset(
    o for o in Occupation if o.is_agricultural
)
