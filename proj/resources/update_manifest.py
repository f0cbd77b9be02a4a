#!/usr/bin/env python3
"""Rewrite knowledge/manifest.json with current SHA-256 hashes."""
import hashlib
import json
import pathlib

CONSUMERS = {
    "team_intro.txt": ["interviewer", "interviewee", "coter", "critic"],
    "scenario_user_prompt.txt": ["interviewer", "interviewee", "coter", "critic"],
    "scenario_system_prompt.txt": ["interviewer", "interviewee", "coter", "critic"],
    "interview_protocol.txt": ["interviewer", "interviewee"],
    "requirement_templates.txt": ["interviewer", "interviewee"],
    "srs_guidance.txt": ["interviewer"],
    "prompt_engineering.txt": ["coter"],
    "output_schemas.txt": ["coter"],
    "review_aspects.txt": ["critic"],
    "rubric_prd.txt": ["judge"],
    "rubric_sdd.txt": ["judge"],
}

root = pathlib.Path(__file__).parent / "knowledge"
entries = []
for name, consumers in CONSUMERS.items():
    digest = hashlib.sha256((root / name).read_bytes()).hexdigest()
    entries.append({"file": name, "consumers": consumers, "sha256": digest})
(root / "manifest.json").write_text(json.dumps({"version": 1, "resources": entries}, indent=2) + "\n")
