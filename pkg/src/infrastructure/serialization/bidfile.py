"""
Bid files: the JSON interchange format for auction instances.

    {"goods": ["A", "B"], "bidders": [1, 2, 3],
     "bids": [{"bidder": 1, "bundle": ["A", "B"], "price": "2"}, ...]}

Prices are integers, decimal strings ("2.5") or fraction strings ("5/2");
JSON floats are refused so nothing is rounded on the way in.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, StrictInt, StrictStr, ValidationError, field_validator, model_validator

from src.core.errors import BidFileError
from src.core.instance import validate_instance
from src.core.models import AuctionInstance, Bid, canonical_bundle
from src.i18n.strings import Strings

GoodName = Annotated[str, Field(min_length=1)]


class BidRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bidder: PositiveInt
    bundle: List[GoodName]
    price: Union[StrictInt, StrictStr]

    @field_validator("price")
    @classmethod
    def _exact_price(cls, value):
        try:
            Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"price {value!r} is not a decimal or 'p/q' fraction") from None
        return value


class BidFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    goods: List[GoodName]
    bidders: List[PositiveInt]
    bids: List[BidRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_ids(self):
        if len(set(self.goods)) != len(self.goods):
            raise ValueError("goods must be listed once each")
        if len(set(self.bidders)) != len(self.bidders):
            raise ValueError("bidders must be listed once each")
        return self

    def to_instance(self) -> AuctionInstance:
        instance = AuctionInstance(
            goods=self.goods,
            bidders=self.bidders,
            bids=tuple(Bid(r.bidder, r.bundle, Fraction(r.price)) for r in self.bids),
        )
        return validate_instance(instance)

    @classmethod
    def from_instance(cls, instance: AuctionInstance) -> "BidFile":
        return cls(
            goods=sorted(instance.goods),
            bidders=sorted(instance.bidders),
            bids=[
                BidRecord(bidder=b.bidder, bundle=list(canonical_bundle(b.bundle)), price=str(b.price))
                for b in sorted(instance.bids, key=lambda b: b.sort_key())
            ],
        )


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(p) for p in error["loc"]) or "<root>"
    return f"{location}: {error['msg']}"


def parse_bid_file(text: str, source: str = "<input>") -> AuctionInstance:
    """Parse and validate; JSON syntax errors carry line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BidFileError(Strings.PARSE_ERROR_AT.value.format(source, e.lineno, e.colno, e.msg),
                           line=e.lineno, column=e.colno) from None
    try:
        bid_file = BidFile.model_validate(data)
    except ValidationError as e:
        raise BidFileError(f"{source}: {_first_error(e)}") from None
    return bid_file.to_instance()


def load_bid_file(path: Path) -> AuctionInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise BidFileError(Strings.FILE_UNREADABLE.value.format(path, e.strerror or e)) from None
    return parse_bid_file(text, source=str(path))


def instance_to_dict(instance: AuctionInstance) -> Dict[str, Any]:
    return BidFile.from_instance(instance).model_dump(mode="json")


def render_bid_file(instance: AuctionInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"
