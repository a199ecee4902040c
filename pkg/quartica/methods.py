"""Rank backend identifiers"""


class RankMethod:
    """Rank backend identifiers"""
    AUTO = "auto"
    EXACT = "exact"
    MODULAR = "modular"

    ALL = (AUTO, EXACT, MODULAR)

    @classmethod
    def parse(cls, value: str) -> str:
        value = (value or cls.AUTO).strip().lower()
        if value not in cls.ALL:
            raise ValueError(
                f"Invalid rank method: {value}. Must be one of {', '.join(cls.ALL)}"
            )
        return value
