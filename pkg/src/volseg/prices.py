"""Price-series ingestion and return computation."""

from __future__ import annotations

import csv
import datetime as dt
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IngestionError, InvalidInputError

__all__ = ["PriceSeries", "ingest_prices", "to_returns"]


@dataclass(frozen=True)
class PriceSeries:
    """Date-sorted positive prices."""

    dates: np.ndarray  # datetime64[D], strictly increasing
    prices: np.ndarray  # float, > 0

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        prices = np.asarray(self.prices, dtype=float)
        if dates.ndim != 1 or prices.ndim != 1 or dates.size != prices.size:
            raise InvalidInputError("dates and prices must be 1-D and equal length")
        if dates.size < 1:
            raise InvalidInputError("price series must be non-empty")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise InvalidInputError("prices must be finite and positive")
        if np.any(np.diff(dates) <= np.timedelta64(0, "D")):
            raise InvalidInputError("dates must be strictly increasing")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "prices", prices)

    def __len__(self):
        return self.prices.size


def _parse_date(text: str, date_format: str | None) -> dt.date:
    if date_format is None:
        return dt.date.fromisoformat(text.strip())
    return dt.datetime.strptime(text.strip(), date_format).date()


def ingest_prices(path, date_column: str, price_column: str,
                  delimiter: str = ",", date_format: str | None = None) -> PriceSeries:
    """Read a delimited text file with a header row into a PriceSeries.

    Rows with unparseable dates or prices raise with their row number;
    non-positive prices are rejected the same way.  Unsorted input is sorted
    ascending with a warning; duplicate dates are an error.
    """
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise IngestionError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            raise IngestionError(f"{path}: empty file (no header row)")
        missing = {date_column, price_column} - set(reader.fieldnames)
        if missing:
            raise IngestionError(
                f"{path}: missing column(s) {sorted(missing)}; "
                f"found {reader.fieldnames}"
            )
        dates: list[dt.date] = []
        prices: list[float] = []
        for i, row in enumerate(reader, start=2):  # header is row 1
            raw_date = row.get(date_column)
            raw_price = row.get(price_column)
            if raw_date is None or raw_price is None:
                raise IngestionError(f"{path}: row {i}: missing value")
            try:
                d = _parse_date(raw_date, date_format)
            except ValueError as exc:
                raise IngestionError(
                    f"{path}: row {i}: cannot parse date {raw_date!r}"
                ) from exc
            try:
                p = float(raw_price)
            except ValueError as exc:
                raise IngestionError(
                    f"{path}: row {i}: cannot parse price {raw_price!r}"
                ) from exc
            if not np.isfinite(p) or p <= 0:
                raise IngestionError(f"{path}: row {i}: non-positive price {p!r}")
            dates.append(d)
            prices.append(p)
    if not dates:
        raise IngestionError(f"{path}: no data rows")
    if len(set(dates)) != len(dates):
        raise IngestionError(f"{path}: duplicate dates")
    d64 = np.array(dates, dtype="datetime64[D]")
    p64 = np.array(prices, dtype=float)
    order = np.argsort(d64, kind="stable")
    if not np.array_equal(order, np.arange(len(dates))):
        warnings.warn(f"{path}: dates were not sorted; sorting ascending")
        d64, p64 = d64[order], p64[order]
    return PriceSeries(d64, p64)


def to_returns(prices, mode: str = "log_pct", center: bool = True) -> np.ndarray:
    """Percent returns from a price series.

    log_pct: 100 * ln(P_t / P_{t-1}); simple_pct: 100 * (P_t/P_{t-1} - 1).
    ``center`` subtracts the sample mean (the constant-trend centering of the
    returns).  Return t corresponds to the t-th price *transition*, so its
    natural date is the (t+1)-th observation date.
    """
    p = prices.prices if isinstance(prices, PriceSeries) else np.asarray(prices, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise InvalidInputError("need at least two prices to compute returns")
    if np.any(p <= 0) or not np.all(np.isfinite(p)):
        raise InvalidInputError("prices must be finite and positive")
    ratio = p[1:] / p[:-1]
    if mode == "log_pct":
        r = 100.0 * np.log(ratio)
    elif mode == "simple_pct":
        r = 100.0 * (ratio - 1.0)
    else:
        raise InvalidInputError("mode must be 'log_pct' or 'simple_pct'")
    if center:
        r = r - r.mean()
    return r
