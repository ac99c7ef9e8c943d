#!/usr/bin/env python3
"""Reference CKAN -> canonical mapping, used to author the expected NDJSON fixture.

title <- title (fallback name); dataset_id <- id (fallback name);
description <- notes (missing/null -> ""); keywords <- tags[*].name, empty dropped,
duplicates dropped keeping the first; landing_url <- url; publisher <- organization.title.
"""
import json
from pathlib import Path

FIX = Path(__file__).resolve().parent.parent.parent / "tests" / "fixtures"
PORTAL = "data.europa.eu"


def s(v):
    return v if isinstance(v, str) else ""


def main():
    lines = []
    for path in sorted((FIX / "ckan").glob("*.json")):
        pkg = json.loads(path.read_text(encoding="utf-8"))
        title = s(pkg.get("title")) or s(pkg.get("name"))
        ident = s(pkg.get("id")) or s(pkg.get("name"))
        if not title or not ident:
            continue
        kws = []
        for t in pkg.get("tags") or []:
            name = s(t.get("name"))
            if name and name not in kws:
                kws.append(name)
        rec = {
            "portal_id": PORTAL,
            "dataset_id": ident,
            "title": title,
            "description": s(pkg.get("notes")),
            "keywords": kws,
            "landing_url": s(pkg.get("url")),
            "language": "und",
            "publisher": s((pkg.get("organization") or {}).get("title")),
        }
        lines.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    (FIX / "ckan.expected.records.ndjson").write_text("\n".join(lines) + "\n", encoding="utf-8")

    # concat_text expectation for the Portuguese record with non-ASCII text.
    rec = json.loads([l for l in lines if '"br-caes"' in l][0])
    text = rec["title"] + "\n" + rec["description"] + "\n" + " ".join(rec["keywords"])
    (FIX / "concat_expected.txt").write_bytes(text.encode("utf-8"))
    print(len(lines), "records")


if __name__ == "__main__":
    main()
