#!/usr/bin/env python3
"""Generate lexicon.tsv, labels.tsv and graph.tsv from concepts.txt.

Run from this directory: python3 gen_lexicon.py
Concept ids are assigned in table order, so appending rows keeps old ids stable.
"""
import sys
import unicodedata
from pathlib import Path

HERE = Path(__file__).resolve().parent
OUT = HERE.parent
LANGS = ["de", "en", "es", "fi", "fr", "it", "pt"]
SMALL_WORDS = {"de", "do", "da", "del", "della", "delle", "di", "du", "des", "la", "le", "of", "the", "and", "com"}


def norm(s):
    s = unicodedata.normalize("NFC", s).lower()
    out, cur = [], []
    for ch in s:
        if ch.isalpha() or ch.isdigit():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return " ".join(out)


def pretty(surface, lang, entity):
    s = surface
    if lang == "fr":
        s = s.replace(" d ", " d'").replace(" l ", " l'")
    if lang == "it":
        s = s.replace(" dell ", " dell'")
    if lang == "de" and not entity:
        # German nouns are capitalized; the head noun is the last word.
        head, _, last = s.rpartition(" ")
        s = (head + " " if head else "") + last[:1].upper() + last[1:]
    if entity:
        words = s.split(" ")
        s = " ".join(w if (i > 0 and w in SMALL_WORDS) else w[:1].upper() + w[1:] for i, w in enumerate(words))
    return s


def parse(path):
    concepts = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        key = parts[0]
        entity = False
        surfaces = {}
        labels = {}
        for part in parts[1:]:
            if part == "entity":
                entity = True
            elif part.startswith("label:"):
                lang, text = part[len("label:"):].split("=", 1)
                labels[lang] = text
            else:
                lang, forms = part.split(":", 1)
                lang = lang.strip()
                assert lang in LANGS, (lineno, lang)
                lst = []
                for f in forms.split(","):
                    f = f.strip()
                    prior = None
                    if "~" in f:
                        f, p = f.split("~")
                        prior = float(p)
                    n = norm(f)
                    assert n, (lineno, f)
                    assert len(n.split(" ")) <= 5, (lineno, f)
                    lst.append((n, prior))
                surfaces[lang] = lst
        concepts.append((key, entity, surfaces, labels))
    return concepts


# Thematic relatedness between concept keys (weight in (0,1]).
THEMES = [
    (1.0, ["dog", "pet", "animal", "dog_zone", "cat"]),
    (0.8, ["dog_zone", "park", "city"]),
    (0.6, ["animal", "bird", "fish", "horse", "cow", "bee", "species", "biodiversity", "hunting", "fishing"]),
    (0.8, ["tree", "tree_register", "forest", "park", "garden", "plant", "flower"]),
    (0.7, ["river", "lake", "sea", "water", "flood", "riverbank", "coast", "beach", "bathing_water", "water_quality"]),
    (0.7, ["water", "drinking_water", "groundwater", "wastewater", "water_quality", "drinking_fountain"]),
    (0.8, ["climate", "climate_change", "temperature", "air_temperature", "weather", "weather_station", "rain", "snow", "snow_depth", "wind", "drought"]),
    (0.6, ["snow", "avalanche", "glacier", "mountain", "alps", "dolomites", "snow_depth"]),
    (0.7, ["pollution", "air_quality", "emissions", "carbon_dioxide", "air", "noise", "climate_change"]),
    (0.7, ["energy", "electricity", "solar_energy", "wind_energy", "energy_consumption", "heating", "oil", "natural_gas"]),
    (0.6, ["waste", "recycling", "pollution"]),
    (0.8, ["traffic", "public_transport", "bus", "bus_stop", "timetable", "train", "bicycle", "cycle_path", "car", "parking", "charging_station", "accident", "street"]),
    (0.5, ["airport", "port", "tourism", "hotel", "restaurant", "event", "museum", "monument", "culture"]),
    (0.7, ["school", "kindergarten", "university", "education", "student", "children", "library"]),
    (0.7, ["hospital", "pharmacy", "doctor", "health", "disease", "vaccination", "death", "elderly"]),
    (0.7, ["population", "census", "birth", "death", "migration", "gender", "children", "elderly", "statistics"]),
    (0.7, ["employment", "unemployment", "income", "poverty", "social_assistance", "tax"]),
    (0.8, ["budget", "spending", "procurement", "finance", "tax", "bank"]),
    (0.6, ["company", "industry", "mining", "export", "import", "price", "inflation", "shop", "market", "bank", "apple_inc", "amazon_company"]),
    (0.9, ["fruit", "apple_fruit", "orchard", "agriculture", "farm", "harvest", "food", "wine", "tree"]),
    (0.7, ["election", "government", "parliament", "law", "court", "crime", "police"]),
    (0.6, ["fire", "forest", "drought", "police"]),
    (0.6, ["map", "address", "boundary", "land_use", "urban_planning", "cadastre", "orthophoto", "elevation_model", "satellite", "geology", "building"]),
    (0.6, ["building", "housing", "street_lighting", "bridge", "street", "urban_planning"]),
    (0.6, ["playground", "swimming_pool", "sports_facility", "hiking_trail", "sport", "park"]),
    (0.5, ["wifi", "broadband", "open_data", "dataset", "statistics", "sensor"]),
    (0.8, ["amazon_river", "amazonia", "river", "forest", "brazil"]),
    (0.8, ["amazon_company", "apple_inc", "shop", "broadband", "united_states"]),
]

# Explicit entity placement edges.
LOCATED = {
    "austria": ["vienna", "graz", "linz", "salzburg", "innsbruck", "klagenfurt", "tyrol", "styria", "carinthia", "upper_austria",
                "lower_austria", "danube", "inn_river", "grossglockner", "statistics_austria", "zamg", "wiener_linien", "oebb", "alps"],
    "ireland": ["dublin", "cork", "galway", "limerick", "shannon", "liffey", "central_statistics_office", "met_eireann"],
    "italy": ["rome", "milan", "trento", "rovereto", "bolzano", "venice", "florence", "naples", "turin", "bologna", "trentino",
              "south_tyrol", "lombardy", "tuscany", "sicily", "adige", "tiber", "lake_garda", "dolomites", "istat", "trenitalia", "alps"],
    "mexico": ["mexico_city", "guadalajara", "monterrey", "puebla", "oaxaca", "jalisco", "yucatan", "inegi"],
    "brazil": ["sao_paulo", "rio_de_janeiro", "brasilia", "belo_horizonte", "recife", "porto_alegre", "bahia", "minas_gerais", "amazonia", "ibge"],
    "finland": ["helsinki", "tampere", "turku", "oulu", "espoo", "vantaa", "lapland", "uusimaa", "lake_saimaa", "statistics_finland", "fmi", "hsl"],
    "france": ["paris", "lyon", "marseille", "toulouse", "bordeaux", "nantes", "strasbourg", "brittany", "normandy", "provence", "seine",
               "loire", "mont_blanc", "insee", "meteo_france", "sncf", "alps"],
    "germany": ["berlin", "munich", "hamburg", "bavaria", "rhine", "danube", "lake_constance"],
    "spain": ["madrid", "barcelona", "catalonia", "andalusia", "tagus"],
    "portugal": ["lisbon", "tagus"],
    "united_kingdom": ["london"],
    "belgium": ["brussels"],
    "netherlands": ["amsterdam", "rhine"],
    "sweden": ["stockholm"],
    "denmark": ["copenhagen"],
    "czechia": ["prague"],
    "hungary": ["budapest", "danube"],
    "greece": ["athens"],
    "united_states": ["new_york"],
    "japan": ["tokyo"],
    "argentina": ["buenos_aires"],
    "switzerland": ["lake_constance", "rhine", "alps"],
    "vienna": ["danube", "wiener_linien"],
    "trentino": ["trento", "rovereto", "lake_garda", "dolomites", "adige"],
    "tyrol": ["innsbruck", "inn_river"],
    "helsinki": ["hsl", "uusimaa"],
    "lombardy": ["milan"],
    "tuscany": ["florence"],
    "bavaria": ["munich"],
    "catalonia": ["barcelona"],
    "european_union": ["european_commission", "eurostat", "europe"],
    "united_nations": ["unesco", "world_health_organization"],
}
COUNTRY_IN_EUROPE = ["austria", "italy", "ireland", "finland", "france", "germany", "spain", "portugal", "switzerland", "united_kingdom",
                     "netherlands", "belgium", "sweden", "norway", "denmark", "poland", "greece", "croatia", "hungary", "czechia", "slovenia"]


def main():
    concepts = parse(HERE / "concepts.txt")
    ids = {}
    for i, (key, _, _, _) in enumerate(concepts, 1):
        assert key not in ids, key
        ids[key] = "c:%08d" % i

    lexicon = {}
    for key, entity, surfaces, _ in concepts:
        for lang, forms in surfaces.items():
            for form, prior in forms:
                lexicon.setdefault((form, lang), {})
                if ids[key] in lexicon[(form, lang)]:
                    continue
                lexicon[(form, lang)][ids[key]] = prior
    rows = []
    errors = 0
    for (form, lang), cands in lexicon.items():
        if len(cands) == 1:
            (cid, prior), = cands.items()
            rows.append((form, lang, cid, 1.0 if prior is None else prior))
        else:
            if any(p is None for p in cands.values()):
                print("unplanned homograph", form, lang, cands, file=sys.stderr)
                errors += 1
            assert sum(p or 0 for p in cands.values()) <= 1.0 + 1e-9
            for cid, prior in cands.items():
                rows.append((form, lang, cid, prior or 0.5))
    if errors:
        sys.exit(1)
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    # Cross-language homographs with different senses only matter for "und" queries; report them.
    by_form = {}
    for form, lang, cid, _ in rows:
        by_form.setdefault(form, set()).add(cid)
    for form, cids in sorted(by_form.items()):
        if len(cids) > 1:
            print("note: homograph across partitions:", form, sorted(cids), file=sys.stderr)

    with open(OUT / "lexicon.tsv", "w", encoding="utf-8", newline="\n") as f:
        for form, lang, cid, prior in rows:
            f.write(f"{form}\t{lang}\t{cid}\t{prior:g}\n")

    with open(OUT / "labels.tsv", "w", encoding="utf-8", newline="\n") as f:
        for key, entity, surfaces, labels in concepts:
            for lang in LANGS:
                if lang in labels:
                    label = labels[lang]
                elif lang in surfaces:
                    label = pretty(surfaces[lang][0][0], lang, entity)
                else:
                    continue
                f.write(f"{ids[key]}\t{lang}\t{label}\n")

    edges = {}

    def add(a, b, w):
        assert a in ids, a
        assert b in ids, b
        if a == b:
            return
        x, y = sorted((ids[a], ids[b]))
        edges[(x, y)] = max(edges.get((x, y), 0.0), w)

    for w, group in THEMES:
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                add(a, b, w)
    for parent, children in LOCATED.items():
        for c in children:
            add(parent, c, 0.8)
    for c in COUNTRY_IN_EUROPE:
        add("europe", c, 0.5)
    with open(OUT / "graph.tsv", "w", encoding="utf-8", newline="\n") as f:
        for (a, b), w in sorted(edges.items()):
            f.write(f"{a}\t{b}\t{w:g}\n")

    print(f"{len(concepts)} concepts, {len(rows)} surface forms, {len(edges)} edges", file=sys.stderr)


if __name__ == "__main__":
    main()
