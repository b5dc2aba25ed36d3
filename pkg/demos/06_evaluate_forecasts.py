"""
Comparing interval forecasters
==============================

Forecast cases are read from CSV (``id,lower,upper,observation``), scored
with the interval score and ranked by mean score. The mean splits into mean
length plus mean penalty. The same report comes from
``ivscore score --cases a.csv --cases b.csv --score winkler:alpha=0.2``.
"""
from ivscore import Winkler
from ivscore.io import evaluate_cases, format_table, parse_forecast_csv, to_json

wide = parse_forecast_csv(b"id,lower,upper,observation\nd1,0,10,4\nd2,0,10,7\nd3,0,10,12\n")
sharp = parse_forecast_csv(b"id,lower,upper,observation\nd1,3,6,4\nd2,5,8,7\nd3,9,11,12\n")

report = evaluate_cases({"wide": wide, "sharp": sharp}, Winkler(0.2))
print(format_table(report))
for name, f in report.forecasters.items():
    print(f"{name}: mean {f['mean']:.3f} = length {f['mean_length']:.3f} + penalty {f['mean_penalty']:.3f}")
print(to_json(report)[:200], "...")
