"""Regenerates src/geode/data/golden_plans.json.

Run from the repo root: python3 tools/build_golden_plans.py
Every plan here must parse and typecheck against the live registry; this
script verifies that before writing.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from geode.experts import signatures  # noqa: E402
from geode.plan import parse, typecheck  # noqa: E402

PLANS = {
    "What is the air quality like in the city known for the Qutub Minar?": """\
qutub_minar_patch = patch_location_expert("Qutub Minar")
city_patch = patch_location_expert("Delhi")
air_quality_patch = air_quality_expert(city_patch, parameter="us-epa-index", mode="patch")
qutub_minar_aq = air_quality_expert(qutub_minar_patch, parameter="us-epa-index", mode="point")
aq_value = point_value(qutub_minar_aq)
text_answer = format("The US EPA air quality index around the Qutub Minar in Delhi is currently {}.", aq_value)
return text_answer, air_quality_patch""",
    "Where does it rain more, Atlanta or Chicago?": """\
atlanta = point_location_expert("Atlanta")
chicago = point_location_expert("Chicago")
atlanta_rain = precipitation_expert(atlanta, mode="point")
chicago_rain = precipitation_expert(chicago, mode="point")
atlanta_value = point_value(atlanta_rain)
chicago_value = point_value(chicago_rain)
is_atlanta = greater(atlanta_value, chicago_value)
wetter = select(is_atlanta, "Atlanta", "Chicago")
salient = select(is_atlanta, atlanta_rain, chicago_rain)
answer = format("It rains more in {} right now.", wetter)
return answer, salient""",
    "Find the highest peak in Telengana": """\
telangana = patch_location_expert("Telangana")
elevation = elevation_expert(telangana, mode="patch")
peak = raster_argmax_expert(elevation)
peak_value = point_value(peak)
answer = format("The highest point in Telangana rises to about {} m.", peak_value)
return answer, peak""",
    "show me the correlation between precipitation and air quality in Bangladesh?": """\
bangladesh = patch_location_expert("Bangladesh")
rain = precipitation_expert(bangladesh, mode="patch")
air = air_quality_expert(bangladesh, parameter="pm2_5", mode="patch")
r = correlation_expert(rain, air)
answer = format("The correlation between precipitation and PM2.5 air quality across Bangladesh is {}.", r)
return answer, air""",
    "Which parts of Telangana have both high elevation and high precipitation?": """\
telangana = patch_location_expert("Telangana")
elevation = elevation_expert(telangana, mode="patch")
rain = precipitation_expert(telangana, mode="patch")
high_elevation = threshold_expert(elevation, 0.6, mode="greater", relative=true)
high_rain = threshold_expert(rain, 0.5, mode="greater", relative=true)
both = intersection_expert(high_elevation, high_rain, mode="raster")
answer = format("High ground that also sees the most rain: {}.", data_to_text_expert(both))
return answer, both""",
    "Impute the missing air quality readings around Delhi": """\
delhi = patch_location_expert("Delhi")
air = air_quality_expert(delhi, parameter="pm10", mode="patch")
filled = imputation_expert(air)
answer = format("PM10 across Delhi after filling gaps: {}.", data_to_text_expert(filled))
return answer, filled""",
}


def main():
    sigs = signatures()
    for query, text in PLANS.items():
        typecheck(parse(text), sigs)
    out = Path(__file__).resolve().parent.parent / "src" / "geode" / "data" / "golden_plans.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(PLANS, indent=2) + "\n")
    print(f"wrote {out} ({len(PLANS)} plans)")


if __name__ == "__main__":
    main()
