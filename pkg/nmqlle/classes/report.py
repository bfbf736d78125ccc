from typing import List, Optional

from pydantic import BaseModel, Field, computed_field


class DimensionRecord(BaseModel):
    d: int
    mean_precision: Optional[float] = Field(None, ge=0.0, le=1.0)
    mean_query_ms: Optional[float] = None
    fit_ms: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.mean_precision is not None


class RetrievalReport(BaseModel):
    """Precision and timing of one method over a sweep of target dimensions.

    Summary fields (Mea.P., Max.P., Mea.T.) only count successful records.
    """

    method: str
    dataset: str = "dataset"
    returns: int = 0
    records: List[DimensionRecord] = []

    @property
    def successful(self) -> List[DimensionRecord]:
        return [r for r in self.records if r.ok]

    @computed_field
    @property
    def mean_precision(self) -> Optional[float]:
        ok = self.successful
        return sum(r.mean_precision for r in ok) / len(ok) if ok else None

    @computed_field
    @property
    def max_precision(self) -> Optional[float]:
        ok = self.successful
        return max(r.mean_precision for r in ok) if ok else None

    @computed_field
    @property
    def mean_query_ms(self) -> Optional[float]:
        timed = [r.mean_query_ms for r in self.successful if r.mean_query_ms is not None]
        return sum(timed) / len(timed) if timed else None
