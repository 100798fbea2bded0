#!/usr/bin/env python3
"""Independent audit of universality certificates.

Reads only the JSON emitted by `upade universal` (or the acceptance
binary) and checks, for every stage certificate, that the recorded
triangle-inequality components cover the reported error on K:

    fit_error_on_K + perturbation_bound_on_K + route_discrepancy_on_K >= err_on_K

A null (non-finite) component fails the audit. Exit status 0 iff every
certificate passes.
"""

import json
import sys


def certificates(doc):
    result = doc.get("result", doc)
    for stage in result.get("stages", []):
        yield stage["certificate"]
    if "certificate" in doc:
        yield doc["certificate"]


def audit(cert):
    a = cert.get("audit", {})
    parts = [a.get("fit_error_on_K"), a.get("perturbation_bound_on_K"), a.get("route_discrepancy_on_K")]
    err = cert.get("err_on_K")
    if err is None or any(x is None for x in parts):
        return False, "null component"
    total = sum(parts)
    return total >= err, f"{total:.6e} >= {err:.6e}"


def main(argv):
    if len(argv) != 2:
        print("usage: audit_certificate.py RESULT.json", file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        doc = json.load(f)
    certs = list(certificates(doc))
    if not certs:
        print("FAIL no certificates found")
        return 1
    ok_all = True
    for cert in certs:
        ok, why = audit(cert)
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'} stage {cert.get('stage')} index {cert.get('index')}: {why}")
    return 0 if ok_all else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
