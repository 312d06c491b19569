"""Prompt privacy audit.

Prompts may carry schema metadata (field names, units, coding labels,
descriptions) but never values from data rows. The audit builds a
corpus of data-borne strings (patient uids, event kind strings that do
not come from the codebook, caller-planted sentinels), subtracts the
codebook allowlist, and scans every logged prompt for exact substring
hits.
"""

from __future__ import annotations


def codebook_allowlist(codebook) -> set[str]:
    """Strings a prompt may legitimately contain because the codebook
    itself carries them."""
    allowed = {codebook.dataset_name, codebook.version}
    for fd in codebook.fields:
        allowed.add(fd.name)
        allowed.add(fd.table)
        allowed.add(fd.dtype)
        if fd.unit:
            allowed.add(fd.unit)
        if fd.description:
            allowed.add(fd.description)
        for label in (fd.coding or {}).values():
            allowed.add(label)
    return {a for a in allowed if a}


def privacy_audit(prompt_log, store, extra_sentinels=()) -> list[dict]:
    """Scan prompts for data-borne tokens; empty list means compliant.

    Each violation names the prompt index, the leaked token, and where
    the token came from (uid, event_kind, or sentinel).
    """
    allowed = codebook_allowlist(store.codebook)

    corpus: list[tuple[str, str]] = []
    seen = set()
    for uid in store.uids:
        corpus.append((uid, "uid"))
        seen.add(uid)
    for kind in store.event_kinds_flat:
        if kind not in allowed and kind not in seen:
            corpus.append((kind, "event_kind"))
            seen.add(kind)
    for token in extra_sentinels:
        if token not in seen:
            corpus.append((token, "sentinel"))
            seen.add(token)

    violations = []
    for idx, prompt in enumerate(prompt_log):
        for token, source in corpus:
            if token and token in prompt:
                violations.append({"promptIndex": idx, "token": token, "source": source})
    return violations
