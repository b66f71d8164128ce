"""Hand-labeled reference ledger of confused class pairs.

Each row: (affected class, confused class, co-occurrence C, IoU,
tree similarity, name-embedding similarity, acceptable categories).
Similarity values of None mark scores unavailable for that pair.  Rows
whose human label was hedged between two categories accept either.
"""

AMB = "ambiguous"
CO = "co_occurring"
FG = "fine_grained"
UN = "unrelated"

REFERENCE_PAIRS = [
    ("overskirt", "hoopskirt", 0.31, 0.17, 0.91, None, {FG, AMB}),
    ("overskirt", "bonnet", 0.03, 0.02, 0.73, 0.32, {FG}),
    ("overskirt", "gown", 0.50, 0.21, 0.73, 0.37, {FG, AMB}),
    ("overskirt", "trench coat", 0.00, 0.00, 0.75, 0.42, {FG}),
    ("academic gown", "mortarboard", 0.72, 0.50, 0.73, 0.10, {CO}),
    ("sunglass", "sunglasses", 0.87, 0.81, 0.64, 0.84, {AMB}),
    ("maillot", "maillot", 0.73, 0.63, 0.70, 1.00, {AMB}),
    ("Windsor tie", "suit", 0.61, 0.32, 0.82, 0.24, {CO}),
    ("screen", "desktop computer", 0.59, 0.29, 0.64, 0.62, {AMB}),
    ("screen", "monitor", 0.87, 0.37, 0.63, 0.44, {AMB}),
    ("tobacco shop", "barbershop", 0.00, 0.00, 0.91, 0.56, {FG}),
    ("tobacco shop", "bookshop", 0.00, 0.00, 0.91, 0.53, {FG}),
    ("monastery", "church", 0.11, 0.03, 0.70, 0.71, {FG}),
    ("monastery", "castle", 0.00, 0.00, 0.60, 0.69, {FG}),
    ("thresher", "harvester", 0.04, 0.01, 0.90, 0.49, {FG}),
    ("parallel bars", "horizontal bar", 0.00, 0.00, 0.90, 0.75, {FG}),
    ("parallel bars", "balance beam", 0.02, 0.01, 0.90, 0.45, {FG}),
    ("mailbag", "purse", 0.10, 0.06, 0.89, 0.19, {FG}),
    ("mailbag", "backpack", 0.00, 0.00, 0.89, 0.16, {FG}),
    ("chain", "necklace", 0.15, 0.09, 0.53, 0.31, {AMB}),
    ("bulletproof vest", "military uniform", 0.31, 0.13, 0.76, 0.38, {CO, AMB}),
    ("bulletproof vest", "assault rifle", 0.32, 0.17, 0.40, 0.35, {CO}),
    ("sombrero", "cowboy hat", 0.15, 0.05, 0.91, 0.51, {FG}),
    ("velvet", "purse", 0.00, 0.00, 0.62, 0.29, {UN}),
    ("velvet", "necklace", 0.00, 0.00, 0.62, 0.51, {UN}),
    ("tape player", "radio", 0.00, 0.00, 0.67, 0.27, {FG}),
    ("tape player", "cassette player", 0.08, 0.01, 0.89, 0.85, {FG}),
    ("assault rifle", "military uniform", 0.47, 0.24, 0.42, 0.42, {CO}),
    ("cornet", "trombone", 0.23, 0.14, 0.91, 0.41, {FG}),
    ("pole", "traffic light", 0.05, 0.03, 0.12, 0.21, {UN}),
    ("muzzle", "sandal", 0.00, 0.00, 0.56, 0.23, {UN}),
    ("ear", "corn", 0.81, 0.52, 0.78, 0.23, {AMB}),
    ("vault", "altar", 0.21, 0.12, 0.62, 0.41, {FG, AMB}),
    ("frying pan", "Dutch oven", 0.00, 0.00, 0.40, 0.59, {FG}),
    ("frying pan", "wok", 0.09, 0.05, 0.92, 0.72, {FG}),
    ("French loaf", "bakery", 0.10, 0.06, 0.24, 0.42, {CO}),
    ("barrel", "rain barrel", 0.16, 0.07, 0.76, 0.70, {FG, AMB}),
    ("spatula", "wooden spoon", 0.24, 0.12, 0.57, 0.62, {FG}),
    ("sax", "flute", 0.00, 0.00, 0.83, 0.65, {FG}),
    ("seashore", "sandbar", 0.64, 0.47, 0.57, 0.69, {CO}),
    ("coffee mug", "cup", 0.61, 0.34, 0.19, 0.63, {AMB}),
    ("coffee mug", "espresso", 0.18, 0.13, 0.21, 0.72, {CO}),
    ("breastplate", "cuirass", 0.71, 0.50, 0.67, 0.48, {AMB}),
    ("beacon", "breakwater", 0.07, 0.04, 0.71, 0.33, {CO}),
    ("suit", "miniskirt", 0.02, 0.01, 0.86, 0.32, {FG}),
    ("hand-held computer", "cellular telephone", 0.22, 0.06, 0.50, 0.42, {AMB}),
    ("hand-held computer", "notebook", 0.03, 0.01, 0.92, 0.32, {FG}),
    ("stopwatch", "digital watch", 0.00, 0.00, 0.83, 0.62, {FG}),
    ("strawberry", "trifle", 0.06, 0.03, 0.32, 0.40, {CO}),
    ("trimaran", "catamaran", 0.18, 0.09, 0.92, 0.60, {FG}),
    ("digital clock", "digital watch", 0.02, 0.01, 0.83, 0.71, {FG}),
    ("hair slide", "necklace", 0.00, 0.00, 0.50, 0.42, {FG}),
    ("hook", "necklace", 0.00, 0.00, 0.53, 0.33, {UN}),
    ("backpack", "purse", 0.02, 0.01, 0.89, 0.56, {FG}),
    ("home theater", "monitor", 0.03, 0.00, 0.56, 0.18, {CO}),
    ("bath towel", "pillow", 0.00, 0.00, 0.59, 0.56, {UN}),
]
