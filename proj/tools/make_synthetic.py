#!/usr/bin/env python3
"""Generates the small synthetic datasets bundled under data/.

The files are stand-ins with a known planted signal so the classifier can be
exercised without the real benchmark corpora. Output is deterministic.

    python3 tools/make_synthetic.py data
"""
import json
import random
import sys
from pathlib import Path

MOTIF = "TATAAT"
MOTIF_OFFSET = 3
PROMOTER_LEN = 12


def wrap(seq, width=60):
    return "\n".join(seq[i:i + width] for i in range(0, len(seq), width))


def write_fasta(path, records):
    with open(path, "w") as f:
        for rid, desc, seq in records:
            f.write(f">{rid}{' ' + desc if desc else ''}\n{wrap(seq)}\n")


def write_tsv(path, rows):
    with open(path, "w") as f:
        for row in rows:
            f.write("\t".join(str(x) for x in row) + "\n")


def promoter_set(out, rng, count=200):
    """TATAAT planted at a fixed offset in half of the 12-bp sequences."""
    records, rows = [], []
    for i in range(count):
        planted = i % 2 == 0
        while True:
            seq = "".join(rng.choice("ACGT") for _ in range(PROMOTER_LEN))
            if planted:
                seq = seq[:MOTIF_OFFSET] + MOTIF + seq[MOTIF_OFFSET + len(MOTIF):]
                break
            if MOTIF not in seq:
                break
        rid = f"prom{i:03d}"
        label = "promoter" if planted else "non-promoter"
        records.append((rid, "synthetic " + label, seq))
        rows.append((rid, 1, PROMOTER_LEN, label))
    d = out / "promoter_synth"
    d.mkdir(parents=True, exist_ok=True)
    write_fasta(d / "promoter.fa", records)
    write_tsv(d / "promoter.tsv", rows)
    manifest = {"name": "custom", "task": "promoter", "fasta": "promoter.fa",
                "annotations": "promoter.tsv", "label_format": "interval-tsv",
                "window": PROMOTER_LEN, "stride": PROMOTER_LEN,
                "background_label": "non-promoter"}
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def coding_set(out, rng, count=20, length=96):
    """GC-rich codon-biased coding stretch inside AT-rich flanks."""
    codons = ["GCC", "GGC", "CTG", "GAG", "AAG", "ACC", "GTG", "CGC"]
    records, rows = [], []
    for i in range(count):
        start = rng.randrange(12, 36)
        n_codons = rng.randrange(8, 14)
        flank = lambda k: "".join(rng.choice("AATTACGT") for _ in range(k))
        coding = "ATG" + "".join(rng.choice(codons) for _ in range(n_codons)) + "TAA"
        seq = flank(start) + coding
        seq += flank(max(0, length - len(seq)))
        seq = seq[:length]
        end = min(length, start + len(coding))
        rid = f"cds{i:03d}"
        records.append((rid, "", seq))
        rows.append((rid, start + 1, end, "coding"))
    d = out / "coding_synth"
    d.mkdir(parents=True, exist_ok=True)
    write_fasta(d / "coding.fa", records)
    write_tsv(d / "coding.tsv", rows)
    manifest = {"name": "custom", "task": "coding_region", "fasta": "coding.fa",
                "annotations": "coding.tsv", "window": 12, "stride": 6,
                "background_label": "noncoding"}
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def structure_set(out, rng, count=12):
    """Segments drawn from helix-, strand- and coil-favoring residue pools."""
    pools = {"H": "AELMKQRA", "E": "VIYFTWVI", "C": "GPNDSGPS"}
    records, rows, ss_records = [], [], []
    for i in range(count):
        seq, ss = "", ""
        while len(seq) < 60:
            kind = rng.choice("HEC")
            k = rng.randrange(4, 10)
            seq += "".join(rng.choice(pools[kind]) for _ in range(k))
            ss += kind * k
        rid = f"prot{i:03d}"
        records.append((rid, "", seq))
        ss_records.append((rid, "", ss))
        pos = 0
        while pos < len(ss):
            end = pos
            while end < len(ss) and ss[end] == ss[pos]:
                end += 1
            rows.append((rid, pos + 1, end, ss[pos]))
            pos = end
    d = out / "structure_synth"
    d.mkdir(parents=True, exist_ok=True)
    write_fasta(d / "proteins.fa", records)
    write_fasta(d / "structures.fa", ss_records)
    write_tsv(d / "structures.tsv", rows)
    manifest = {"name": "custom", "task": "structure", "fasta": "proteins.fa",
                "annotations": "structures.tsv", "window": 8, "stride": 4,
                "bits_per_value": 2, "background_label": "C"}
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    write_fasta(d / "base.fa", records[:1])
    write_fasta(d / "base_structure.fa", ss_records[:1])
    write_fasta(d / "targets.fa", records[1:4])


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    promoter_set(out, random.Random(20240501))
    coding_set(out, random.Random(20240502))
    structure_set(out, random.Random(20240503))


if __name__ == "__main__":
    main()
