"""Field retrieval: one value at a point, or a sampled-and-fitted raster
over a patch."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..analytics import rbf_fit_predict
from ..config import EngineConfig
from ..errors import EmptyGeometryError, UpstreamUnavailableError
from ..patch import DataPoint, GeoPatch, GridSpec, RasterLayer, RasterType
from .elevation import ElevationClient
from .sampling import sample_patch
from .sources import FieldSource
from .weather import WeatherClient

log = logging.getLogger(__name__)

BULK_SUCCESS_FLOOR = 0.75


@dataclass(frozen=True)
class RetrievalResult:
    patch: GeoPatch
    freshness_s: float | None  # age of the oldest observation used
    partial: bool  # some bulk samples failed but enough succeeded


class FieldRetriever:
    def __init__(self, weather: WeatherClient, elevation: ElevationClient, config: EngineConfig):
        self.weather = weather
        self.elevation = elevation
        self.config = config

    def retrieve(self, patch: GeoPatch, source: FieldSource, mode: str) -> RetrievalResult:
        if mode == "point":
            return self._point(patch, source)
        return self._patch(patch, source)

    def _point(self, patch: GeoPatch, source: FieldSource) -> RetrievalResult:
        loc = patch.vector.location
        freshness = None
        if source.field == "elevation":
            value = self.elevation.elevations([(loc.lat, loc.lon)])[0]
        else:
            cond = self.weather.current(loc.lat, loc.lon)
            value = self.weather.value_for(cond, source.field, source.parameter)
            if cond.observed_epoch is not None:
                freshness = max(cond.retrieved_epoch - cond.observed_epoch, 0.0)
        marker = DataPoint(position=loc, name=source.name, value=value, unit=source.unit)
        vector = replace(patch.vector, points=(marker,))
        out = GeoPatch(vector=vector, raster=patch.raster, name=patch.name)
        return RetrievalResult(patch=out, freshness_s=freshness, partial=False)

    def _patch(self, patch: GeoPatch, source: FieldSource) -> RetrievalResult:
        bbox = patch.vector.bbox
        if bbox.is_degenerate:
            raise EmptyGeometryError(
                f"patch {patch.name!r} has no extent to sample; use mode='point'"
            )
        positions = sample_patch(patch, self.config.sample_count, self.config.seed)
        if source.field == "elevation":
            values = self.elevation.elevations([(p.lat, p.lon) for p in positions])
            samples = [(p.lat, p.lon, v) for p, v in zip(positions, values)]
            freshness = None
            partial = False
        else:
            outcomes = self._fan_out(positions, source)
            good = [(p, v, age) for p, (v, age) in zip(positions, outcomes) if v is not None]
            if len(good) < BULK_SUCCESS_FLOOR * len(positions):
                first_error = next(err for _, err in zip(positions, outcomes) if err[0] is None)
                raise UpstreamUnavailableError(
                    f"only {len(good)} of {len(positions)} bulk samples succeeded "
                    f"(first failure: {first_error[1]})"
                )
            partial = len(good) < len(positions)
            if partial:
                log.warning(
                    "proceeding with %d of %d bulk samples for %s",
                    len(good),
                    len(positions),
                    source.name,
                )
            samples = [(p.lat, p.lon, v) for p, v, _ in good]
            ages = [age for _, _, age in good if age is not None]
            freshness = max(ages) if ages else None
        spec = GridSpec(self.config.grid_rows, self.config.grid_cols, bbox)
        grid = rbf_fit_predict(samples, spec)
        raster = RasterLayer(
            name=source.name,
            rtype=RasterType.non_color,
            grid=grid,
            bbox=bbox,
            colormap=source.colormap,
        )
        out = GeoPatch(vector=patch.vector, raster=raster, name=patch.name)
        return RetrievalResult(patch=out, freshness_s=freshness, partial=partial)

    def _fan_out(self, positions, source: FieldSource):
        """Per-position weather lookups, bounded in-flight, order kept.
        Each outcome is (value, age_seconds) on success or (None, error)."""

        def one(pos):
            try:
                cond = self.weather.current(pos.lat, pos.lon)
                value = self.weather.value_for(cond, source.field, source.parameter)
            except Exception as exc:
                return (None, exc)
            age = None
            if cond.observed_epoch is not None:
                age = max(cond.retrieved_epoch - cond.observed_epoch, 0.0)
            return (value, age)

        with ThreadPoolExecutor(max_workers=self.config.max_in_flight) as pool:
            return list(pool.map(one, positions))
