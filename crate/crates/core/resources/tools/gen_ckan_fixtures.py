#!/usr/bin/env python3
"""Write the CKAN package fixtures (tests/fixtures/ckan/*.json, tests/fixtures/mock_ckan/*.json).

The packages imitate CKAN 2.x package_show payloads, including fields the
parser must ignore (resources, extras, license). One file is deliberately
malformed (no title and no name).
"""
import json
from pathlib import Path

FIX = Path(__file__).resolve().parent.parent.parent / "tests" / "fixtures"

# (id, name, title, notes, tags, url, organization)
PACKAGES = [
    ("at-hundezonen", "hundezonen-wien", "Hundezonen in Wien",
     "Standorte und Flächen aller Hundezonen und Hundeauslaufplätze in Wien. Hunde dürfen dort ohne Leine laufen.",
     ["hunde", "hundezonen", "wien", "freizeit", "hunde"], "https://www.data.gv.at/katalog/dataset/hundezonen-wien", "Stadt Wien"),
    ("at-baumkataster", "baumkataster-wien", "Baumkataster Wien",
     "Der Baumkataster enthält alle Bäume auf öffentlichem Grund in Wien mit Baumart, Höhe und Pflanzjahr.",
     ["bäume", "umwelt", "wien"], "https://www.data.gv.at/katalog/dataset/baumkataster", "Stadt Wien"),
    ("at-luftguete-graz", "luftguete-graz", "Luftgüte Messwerte Graz",
     "Stündliche Messwerte der Luftgüte an den Messstationen in Graz.",
     ["luftgüte", "umwelt"], "https://www.data.gv.at/katalog/dataset/luftguete-graz", "Land Steiermark"),
    ("at-schnee-tirol", "schneehoehe-tirol", "Schneehöhe und Lufttemperatur Tirol",
     "Tägliche Messungen der Schneehöhe und der Lufttemperatur an den Wetterstationen in Tirol.",
     ["schnee", "klima", "wetter"], "", "Land Tirol"),
    ("at-streuobst", "streuobstwiesen-noe", "Streuobstwiesen Niederösterreich",
     "Verzeichnis der Obstwiesen und Obstgärten mit alten Apfelsorten in Niederösterreich. Äpfel und Birnen werden kartiert.",
     ["äpfel", "obst", "landwirtschaft"], "https://www.data.gv.at/katalog/dataset/streuobst", "Land Niederösterreich"),
    ("ie-dog-licences", "dog-licences-by-county", "Dog licences by county",
     "Number of dog licences issued by each county council in Ireland, including Dublin and Cork.",
     ["dogs", "pets", "", "licences", "dogs"], "https://data.gov.ie/dataset/dog-licences", "Department of Rural and Community Development"),
    ("ie-air-dublin", "air-quality-dublin", "Air quality monitoring in Dublin",
     "Hourly air quality readings and emissions estimates from monitoring stations across Dublin.",
     ["air quality", "pollution", "environment"], "https://data.gov.ie/dataset/air-quality-dublin", "Environmental Protection Agency"),
    (None, "daily-rainfall-ireland", "Daily rainfall and air temperature",
     "Daily rainfall totals and air temperatures recorded at weather stations operated by Met Éireann.",
     ["rain", "weather", "climate change"], "https://data.gov.ie/dataset/daily-rainfall", "Met Éireann"),
    ("ie-orchards", "apple-orchards", "Apple orchards and fruit farms",
     "Locations of apple orchards and fruit farms registered with the Department of Agriculture.",
     ["apples", "orchards", "agriculture"], "https://data.gov.ie/dataset/apple-orchards", "Department of Agriculture"),
    ("ie-transport", "dublin-public-transport-timetables", "Public transport timetables Dublin",
     "Bus and train timetables for public transport in the Dublin region.",
     ["transport", "bus", "timetable"], "https://data.gov.ie/dataset/gtfs-dublin", "National Transport Authority"),
    ("it-aree-cani", "aree-cani-trento", "Aree cani nel comune di Trento",
     "Elenco delle aree cani e dei parchi dove i cani possono correre liberamente nella città di Trento.",
     ["cani", "parchi", "trento"], "https://dati.trentino.it/dataset/aree-cani", "Comune di Trento"),
    ("it-alberi", "alberi-rovereto", "Censimento degli alberi di Rovereto",
     "Posizione, specie e dimensioni degli alberi presenti nei parchi e lungo le strade di Rovereto.",
     ["alberi", "verde urbano"], "https://dati.trentino.it/dataset/alberi-rovereto", "Comune di Rovereto"),
    ("it-meteo", "dati-meteo-trentino", "Dati meteo del Trentino",
     "Temperatura dell'aria, precipitazioni e altezza della neve misurate dalle stazioni meteorologiche del Trentino.",
     ["meteo", "neve", "temperatura"], "https://dati.trentino.it/dataset/meteo", "Provincia autonoma di Trento"),
    ("it-meleti", "meleti-val-di-non", "Meleti della Val di Non",
     "Superfici coltivate a meleti e produzione di mele in Trentino.",
     ["mele", "agricoltura", "frutta"], "https://dati.trentino.it/dataset/meleti", "Provincia autonoma di Trento"),
    ("it-rifiuti", "raccolta-differenziata-rifiuti", None,
     "Quantità di rifiuti raccolti e percentuale di raccolta differenziata per comune.",
     ["rifiuti", "ambiente"], "https://dati.trentino.it/dataset/rifiuti", "Provincia autonoma di Trento"),
    ("mx-perros", "perros-cdmx", "Perros rescatados en la Ciudad de México",
     "Registro de perros rescatados y adoptados por los centros de atención animal de la Ciudad de México.",
     ["perros", "animales", "mascotas"], "https://datamx.io/dataset/perros-cdmx", "Gobierno de la Ciudad de México"),
    ("mx-aire", "calidad-aire-monterrey", "Calidad del aire en Monterrey",
     "Mediciones horarias de la calidad del aire y de las emisiones en las estaciones de monitoreo de Monterrey.",
     ["contaminación", "aire"], "https://datamx.io/dataset/calidad-aire", "Gobierno de Nuevo León"),
    ("mx-lluvias", "lluvias-jalisco", "Lluvias y temperatura en Jalisco",
     "Registros diarios de lluvia y temperatura de las estaciones meteorológicas del estado de Jalisco.",
     ["clima", "lluvia"], "https://datamx.io/dataset/lluvias-jalisco", "Gobierno de Jalisco"),
    ("mx-presupuesto", "presupuesto-puebla", "Presupuesto de egresos del municipio de Puebla",
     "Presupuesto anual aprobado y gasto ejercido por dependencia en el municipio de Puebla.",
     ["presupuesto", "finanzas"], "https://datamx.io/dataset/presupuesto-puebla", "Ayuntamiento de Puebla"),
    ("mx-escuelas", "escuelas-oaxaca", "Escuelas públicas de Oaxaca",
     None,
     ["educación", "escuelas"], "https://datamx.io/dataset/escuelas-oaxaca", "Gobierno de Oaxaca"),
    ("br-caes", "caes-gatos-vacinados-sp", "Cães e gatos vacinados em São Paulo",
     "Número de cães e gatos vacinados contra a raiva por bairro da cidade de São Paulo.",
     ["cães", "gatos", "vacinação"], "https://dados.gov.br/dataset/vacinacao-animal", "Prefeitura de São Paulo"),
    ("br-arvores", "inventario-arvores-recife", "Inventário de árvores do Recife",
     "Localização e espécie das árvores plantadas nas ruas e praças do Recife.",
     ["árvores", "meio ambiente"], "https://dados.gov.br/dataset/arvores-recife", "Prefeitura do Recife"),
    ("br-incendios", "incendios-amazonia", "Incêndios florestais na Amazônia",
     "Focos de incêndio detectados por satélite na Amazônia e no Cerrado.",
     ["incêndios", "floresta", "satélite"], "https://dados.gov.br/dataset/focos-incendio", "INPE"),
    ("br-onibus", "horarios-onibus-bh", "Horários dos ônibus de Belo Horizonte",
     "Horários e itinerários das linhas de ônibus do transporte público de Belo Horizonte.",
     ["ônibus", "transporte"], "https://dados.gov.br/dataset/onibus-bh", "Prefeitura de Belo Horizonte"),
    ("br-leitos", "leitos-hospitalares", "Leitos hospitalares por município",
     "Número de leitos nos hospitais públicos por município brasileiro.",
     ["saúde", "hospitais"], "https://dados.gov.br/dataset/leitos", "Ministério da Saúde"),
    ("fi-koirapuistot", "koirapuistot-helsinki", "Koirapuistot Helsingissä",
     "Helsingin kaupungin koirapuistojen sijainnit ja aukioloajat. Koirat saavat liikkua aitauksessa vapaasti.",
     ["koirat", "puistot", "helsinki"], "https://www.avoindata.fi/data/fi/dataset/koirapuistot", "Helsingin kaupunki"),
    ("fi-ilmanlaatu", "ilmanlaatu-helsinki", "Ilmanlaatu Helsingin seudulla",
     "Ilmanlaatu mitattuna tunneittain mittausasemilla pääkaupunkiseudulla.",
     ["ilmanlaatu", "saasteet", "helsinki"], "https://www.avoindata.fi/data/fi/dataset/ilmanlaatu", "Helsingin seudun ympäristöpalvelut"),
    ("fi-lumi", "lumensyvyys-lappi", "Lumensyvyys ja lämpötila Lapissa",
     "Ilmatieteen laitos mittaa päivittäin lumensyvyys ja ilman lämpötila sääasemilla ympäri Suomea.",
     ["lumi", "sää", "lappi"], "https://www.avoindata.fi/data/fi/dataset/lumensyvyys", "Ilmatieteen laitos"),
    ("fi-kirjastot", "kirjastojen-lainaustilastot", "Helsingin kaupunginkirjaston lainaustilastot",
     "Kirjastot, lainausmäärät ja kävijät kuukausittain jokaisessa toimipisteessä.",
     [], "https://www.avoindata.fi/data/fi/dataset/kirjastot", None),
    ("fr-chiens", "espaces-canins-paris", "Espaces canins à Paris",
     "Liste des espaces canins et des parcs ouverts aux chiens dans les arrondissements de Paris.",
     ["chiens", "parcs", "paris"], "https://www.nosdonnees.fr/dataset/espaces-canins", "Ville de Paris"),
    ("fr-air-lyon", "qualite-air-lyon", "Qualité de l'air à Lyon",
     "Mesures horaires de la qualité de l'air et des émissions de dioxyde d'azote à Lyon.",
     ["pollution", "air"], "https://www.nosdonnees.fr/dataset/qualite-air-lyon", "Métropole de Lyon"),
    ("fr-arbres", "arbres-alignement-nantes", "Arbres d'alignement de Nantes",
     "Inventaire des arbres plantés le long des rues de Nantes avec leur espèce et leur hauteur.",
     ["arbres", "environnement"], "https://www.nosdonnees.fr/dataset/arbres-nantes", "Nantes Métropole"),
    ("fr-velos", "comptage-velos-strasbourg", "Comptage des vélos à Strasbourg",
     "Nombre de vélos comptés chaque jour sur les pistes cyclables de Strasbourg.",
     ["vélo", "mobilité"], "https://www.nosdonnees.fr/dataset/velos-strasbourg", "Eurométropole de Strasbourg"),
    ("fr-vergers", "vergers-normandie", "Vergers de pommes en Normandie",
     "Surfaces des vergers de pommes à cidre en Normandie, par commune.",
     ["pommes", "vergers", "agriculture"], "https://www.nosdonnees.fr/dataset/vergers", "Région Normandie"),
]

MOCK_EXTRA = ("at-radwege", "radwege-linz", "Radwege Linz",
              "Verlauf aller Radwege in Linz mit Breite und Belag.",
              ["radwege", "fahrrad"], "https://www.data.gv.at/katalog/dataset/radwege-linz", "Stadt Linz")


def package(spec, n):
    pid, name, title, notes, tags, url, org = spec
    pkg = {
        "license_id": "cc-by",
        "metadata_created": "2017-0%d-1%dT08:00:00.000000" % (1 + n % 9, n % 10),
        "metadata_modified": "2018-0%d-2%dT09:30:00.000000" % (1 + n % 9, n % 10),
    }
    if pid is not None:
        pkg["id"] = pid
    pkg["name"] = name
    if title is not None:
        pkg["title"] = title
    pkg["notes"] = notes
    pkg["url"] = url
    pkg["tags"] = [{"display_name": t, "name": t, "state": "active", "vocabulary_id": None} for t in tags]
    if org is not None:
        pkg["organization"] = {"name": org.lower().replace(" ", "-"), "title": org, "is_organization": True}
    pkg["resources"] = [{"format": "CSV", "url": (url or "https://example.org/data") + "/data.csv", "name": "data"}]
    pkg["extras"] = [{"key": "spatial", "value": "{}"}]
    return pkg


def main():
    ckan = FIX / "ckan"
    ckan.mkdir(parents=True, exist_ok=True)
    for old in ckan.glob("*.json"):
        old.unlink()
    for n, spec in enumerate(PACKAGES):
        path = ckan / ("%02d-%s.json" % (n + 1, spec[1]))
        path.write_text(json.dumps(package(spec, n), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    bad = {"id": "broken-001", "notes": "Harvested entry without title or name.", "tags": [], "resources": []}
    (ckan / "35-broken.json").write_text(json.dumps(bad, indent=2) + "\n", encoding="utf-8")

    mock = FIX / "mock_ckan"
    mock.mkdir(parents=True, exist_ok=True)
    pkgs = [package(s, n) for n, s in enumerate(PACKAGES[:5] + [MOCK_EXTRA])]
    for page in range(3):
        body = {
            "help": "https://www.data.gv.at/katalog/api/3/action/help_show?name=package_search",
            "success": True,
            "result": {"count": 6, "sort": "score desc, metadata_modified desc", "results": pkgs[page * 2:page * 2 + 2]},
        }
        (mock / ("page-%d.json" % page)).write_text(json.dumps(body, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    empty = {"help": "", "success": True, "result": {"count": 6, "results": []}}
    (mock / "page-3.json").write_text(json.dumps(empty, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
