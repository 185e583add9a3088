"""Built-in weakness descriptions for the covered CWE ids.

Short manifestation/root-cause prose used as generation input when the
caller does not supply its own description text.
"""

from __future__ import annotations

from veripg.generator.pipeline import CweDescription

_D = {
    "CWE-226": (
        "Sensitive Information in Resource Not Removed Before Reuse",
        "A storage element that held sensitive data is handed back or reused "
        "without its contents being cleared. Root cause: no reset or scrub "
        "assignment ever writes a known constant into the register, so stale "
        "secrets stay readable through the datapath.",
    ),
    "CWE-1231": (
        "Improper Prevention of Lock Bit Modification",
        "A lock bit that should be write-once can be rewritten after being "
        "set. Root cause: the update of the lock register is not guarded by "
        "any condition, so later writes land unconditionally every cycle.",
    ),
    "CWE-1232": (
        "Improper Lock Behavior After Power State Transition",
        "Protection configuration is lost or overridden when control passes "
        "between power states. Root cause: more than one clocked process "
        "drives the same protection register unconditionally, so whichever "
        "controller runs last wins.",
    ),
    "CWE-1234": (
        "Internal or Debug Modes Allow Override of Locks",
        "A debug or test mode term is OR-ed into the write-enable condition "
        "of a locked register, so the lock check can be bypassed whenever "
        "the override input is raised.",
    ),
    "CWE-1243": (
        "Sensitive Non-Volatile Information Not Protected During Debug",
        "A debug observation cell stays instantiated in the shipping design "
        "and its ports connect internal secret-carrying signals, exposing "
        "them to debug infrastructure.",
    ),
    "CWE-1244": (
        "Internal Asset Exposed to Unsafe Debug Access Level",
        "Individual bits of an internal register are tapped directly onto an "
        "observable pin through a continuous assignment with a bit-select, "
        "bypassing any access qualification.",
    ),
    "CWE-1245": (
        "Improper Finite State Machines in Hardware Logic",
        "A state machine decoded from a state register lacks a default "
        "recovery arm, so undefined encodings leave the machine stuck in an "
        "unspecified state.",
    ),
    "CWE-1255": (
        "Comparison Logic is Vulnerable to Power Side-Channel Attacks",
        "A secret comparison loop branches on per-element mismatches, making "
        "power or timing depend on how much of the secret matches.",
    ),
    "CWE-1258": (
        "Exposure of Sensitive System Information Due to Uncleared Debug Information",
        "A readout bus concatenates raw internal state words and drives them "
        "out continuously, so debug information leaks without any gating.",
    ),
    "CWE-1271": (
        "Uninitialized Value on Reset for Registers Holding Security Settings",
        "A clocked register that carries security-relevant state has neither "
        "an asynchronous reset term in its sensitivity list nor any guarded "
        "initialization, so it runs from power-up garbage.",
    ),
    "CWE-1280": (
        "Access Control Check Implemented After Asset is Accessed",
        "An access-control condition is read by a branch before the blocking "
        "assignment that produces it has executed in the same process, so "
        "the check consumes a stale or undefined value.",
    ),
    "CWE-1300": (
        "Improper Protection of Physical Side Channels",
        "Secret material is combined combinationally (for example XOR-ed) "
        "straight onto a routed net without masking or registering, giving "
        "physical probes a clean correlation target.",
    ),
}


def builtin_description(cwe_id: str) -> CweDescription:
    if cwe_id not in _D:
        raise KeyError(f"no built-in description for {cwe_id}")
    title, body = _D[cwe_id]
    return CweDescription(cwe_id=cwe_id, title=title, body=body)


def covered_cwe_ids() -> list[str]:
    return sorted(_D, key=lambda c: int(c.split("-")[1]))
