#!/usr/bin/env python3
"""Writes the scripted transcripts and expected outputs under fixtures/.

The expected final prompt is computed here with its own ordering and JSON rendering,
so the replay test compares the C++ pipeline against an independent implementation.
"""
import heapq
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
STEPS = ["components", "core_functions", "enhancements_and_scope", "front_end"]
RANK = {"docs": 0, "env": 1, "code": 2, "entry": 3}


def fenced(obj):
    return "Here is my reply.\n\n```json\n" + json.dumps(obj, indent=2) + "\n```\n"


def interview(qa):
    """qa: step -> list of (question, purpose, [requirement lines])."""
    entries = []
    for step in STEPS:
        for question, purpose, answers in qa[step]:
            entries.append({"match": f"[request:interviewer.question step={step}]",
                            "response": fenced({"status": "question", "question": question, "purpose": purpose})})
            entries.append({"match": f"[request:interviewee.answer step={step}]",
                            "response": fenced({"requirements": answers})})
        entries.append({"match": f"[request:interviewer.question step={step}]",
                        "response": fenced({"status": "step_complete"})})
    return entries


GAME_QA = {
    "components": [
        ("Which parts should the game consist of?", "Identify the main components.",
         ["[overall] The game shall consist of a 4x4 board, a score panel and a restart button",
          "[component] The board shall hold numbered tiles that are powers of two"]),
        ("Should the game keep a best score?", "Decide on persistent state.",
         ["[component] The score panel shall show the current score and the best score"]),
    ],
    "core_functions": [
        ("How does the player move tiles?", "Capture the core interaction.",
         ["[overall] The game shall let the player slide all tiles with the arrow keys",
          "[conditional] When two tiles with the same value collide, the board shall merge them into one tile with their sum"]),
        ("What happens after each move?", "Capture the turn rules.",
         ["[conditional] When a move changes the board, the board shall spawn a new tile with value 2 or 4 on a random empty cell",
          "[conditional] When no move is possible, the game shall show a game over message"]),
    ],
    "enhancements_and_scope": [
        ("Is there a win condition?", "Bound the scope.",
         ["[conditional] When a tile reaches 2048, the game shall show a win message and let the player continue"]),
        ("Are undo or online features wanted?", "Exclude features from the first version.",
         ["[overall] The game shall not include undo, accounts or online leaderboards in the first version"]),
    ],
    "front_end": [
        ("Where does the game run?", "Pick the delivery platform.",
         ["[overall] The game shall run in a desktop web browser without a server"]),
        ("How should tiles look?", "Describe the visual design.",
         ["[component] Each tile shall use a distinct background colour for its value",
          "[component] The board shall animate tile movement in under 150 ms"]),
    ],
}

GAME_SRS = {"sections": [
    {"heading": "Purpose", "body": "A single player 2048 puzzle game for the browser.", "source_turns": [1]},
    {"heading": "System Components", "body": "Board, tiles, score panel with best score, restart button.", "source_turns": [1, 2]},
    {"heading": "Functional Requirements", "body": "Arrow keys slide tiles; equal tiles merge; a 2 or 4 spawns after each changing move; game over when stuck.", "source_turns": [3, 4]},
    {"heading": "Scope", "body": "Win message at 2048 with the option to continue. No undo, accounts or leaderboards.", "source_turns": [5, 6]},
    {"heading": "Front-end Requirements", "body": "Runs in a desktop browser without a server. Distinct tile colours; moves animate in under 150 ms.", "source_turns": [7, 8]},
]}


def task(tid, title, desc, deps, cat):
    return {"id": tid, "title": title, "description": desc, "depends_on": deps, "category": cat}


# Deliberately listed out of order; the pipeline must sort it.
GAME_TASKS_V1 = [
    task("T6", "Entry page", "Create index.html that loads the game and wires keyboard input.", ["T4", "T5"], "entry"),
    task("T4", "Game logic", "Implement board state, sliding, merging and tile spawning in game.js.", ["T2"], "code"),
    task("T1", "Readme", "Write README.md with the rules and how to open the game.", [], "docs"),
    task("T5", "Rendering", "Render the board and score panel with CSS transitions under 150 ms.", ["T3", "T4"], "code"),
    task("T2", "Project layout", "Create the folder layout and an empty style.css and game.js.", [], "env"),
    task("T3", "Colour palette", "Define tile colours per value in style.css.", ["T2"], "code"),
]

GAME_TASKS_V2 = [
    task("T6", "Entry page", "Create index.html that loads the game, wires arrow keys and the restart button.", ["T4", "T5", "T7"], "entry"),
    task("T4", "Game logic", "Implement board state, sliding, merging, spawning a 2 or 4 after each changing move, and win and game over detection in game.js.", ["T2"], "code"),
    task("T7", "Best score", "Store the best score in localStorage and show it next to the current score.", ["T4"], "code"),
    task("T1", "Readme", "Write README.md with the rules, the 2048 win condition and how to open the game.", [], "docs"),
    task("T5", "Rendering", "Render the board and score panel with CSS transitions under 150 ms.", ["T3", "T4"], "code"),
    task("T2", "Project layout", "Create the folder layout and an empty style.css and game.js.", [], "env"),
    task("T3", "Colour palette", "Define tile colours per value in style.css.", ["T2"], "code"),
]

ASPECTS = ["Completeness", "Correctness", "OrganizationTraceability", "QualityAttributes", "Clear", "Concise",
           "Consistency", "TechnicalDetailExecutability"]


def critique(ids, low, feedback):
    return {"aspects": {a: f"{a} reviewed against the specification." for a in ASPECTS},
            "summary": {"strengths": "Tasks follow the specification closely.",
                        "weaknesses": "Best score persistence and win detection are not planned." if low else "No major gaps."},
            "part_scores": {i: (3 if low and i == "T4" else 4) for i in ids},
            "feedback": feedback}


def order(tasks):
    deps = {t["id"]: set(t["depends_on"]) for t in tasks}
    by_id = {t["id"]: t for t in tasks}
    heap = [(RANK[t["category"]], t["id"]) for t in tasks if not deps[t["id"]]]
    heapq.heapify(heap)
    done, out = set(), []
    while heap:
        _, tid = heapq.heappop(heap)
        done.add(tid)
        out.append(by_id[tid])
        for t in tasks:
            if t["id"] not in done and tid in deps[t["id"]] and deps[t["id"]] <= done \
                    and all(x[1] != t["id"] for x in heap):
                heapq.heappush(heap, (RANK[t["category"]], t["id"]))
    assert len(out) == len(tasks)
    return out


def user_prompt(initial, tasks):
    body = json.dumps({"tasks": order(tasks)}, indent=2, sort_keys=True, ensure_ascii=False)
    return (f'Original request: "{initial.strip()}". Implement this request by completing the tasks below strictly '
            "in the listed order. Setup tasks come first, every task lists the tasks it depends on, "
            "and the entry task is last.\n\n```json\n" + body + "\n```\n")


def write(path, content):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content if isinstance(content, str) else json.dumps(content, indent=2) + "\n")


def game_fixture():
    initial = "I want a 2048 game\n"
    ids_v1 = [t["id"] for t in order(GAME_TASKS_V1)]
    ids_v2 = [t["id"] for t in order(GAME_TASKS_V2)]
    entries = interview(GAME_QA)
    entries.append({"match": "[request:interviewer.srs]", "response": fenced(GAME_SRS)})
    entries.append({"match": "[request:coter.task_list]", "response": fenced({"tasks": GAME_TASKS_V1})})
    entries.append({"match": "[request:critic.review]",
                    "response": fenced(critique(ids_v1, True, "Add a task for the best score and plan win and game over detection."))})
    entries.append({"match": "[request:coter.task_list]", "response": fenced({"tasks": GAME_TASKS_V2})})
    entries.append({"match": "[request:critic.review]", "response": fenced(critique(ids_v2, False, "Ready to implement."))})
    write(ROOT / "2048" / "input.txt", initial)
    write(ROOT / "2048" / "transcript.json", {"entries": entries})
    write(ROOT / "2048" / "expected_prompt.txt", user_prompt(initial, GAME_TASKS_V2))


def retry_fixture():
    entries = interview(GAME_QA)
    entries.append({"match": "[request:interviewer.srs]", "response": fenced(GAME_SRS)})
    cyclic = [task("A", "a", "a", ["B"], "code"), task("B", "b", "b", ["A"], "code"), task("E", "e", "e", ["A"], "entry")]
    no_entry = [task("A", "a", "a", [], "code")]
    entries.append({"match": "[request:coter.task_list]", "response": fenced({"tasks": cyclic})})
    entries.append({"match": "[request:coter.task_list]", "response": "I could not produce a task list this time."})
    entries.append({"match": "[request:coter.task_list]", "response": fenced({"tasks": no_entry})})
    write(ROOT / "retry_cap" / "input.txt", "I want a 2048 game\n")
    write(ROOT / "retry_cap" / "transcript.json", {"entries": entries})


SYSTEM_QA = {
    "components": [
        ("What does the agent produce?", "Identify outputs.",
         ["[overall] The reviewer agent shall produce a code review for each pull request"])],
    "core_functions": [
        ("What must each review contain?", "Capture the core duties.",
         ["[component] Each review shall list defects with file and line",
          "[conditional] When a defect is a security risk, the reviewer agent shall mark it as blocking"])],
    "enhancements_and_scope": [
        ("What is out of scope?", "Bound the role.",
         ["[overall] The reviewer agent shall not rewrite the submitted code"])],
    "front_end": [
        ("How is the review delivered?", "Fix the output channel.",
         ["[component] The review shall be posted as one markdown comment"])],
}

SYSTEM_DRAFT = {
    "role_definition": "You are the code reviewer of a four person development team.",
    "knowledge": "Secure coding practice, the team style guide and common defect classes.",
    "tools": "Read-only access to the repository and the pull request diff.",
    "context": "Pull requests arrive from the coder agent after the tester agent has run the suite.",
    "work_modes": [
        {"name": "Review", "conduct": "List every defect with file and line and mark security risks as blocking.",
         "examples": ["src/auth.py:42 blocking: password compared with =="]},
        {"name": "Clarify", "conduct": "Ask one question when the intent of a change is unclear.",
         "examples": ["Is the retry loop in sync.py meant to be unbounded?"]},
    ],
}


def system_fixture():
    initial = ("You review code.\nBe thorough.\n"
               "### OUTPUT TEMPLATE\n## Summary\n<one paragraph>\n## Defects\n- <file>:<line> <severity> <text>\n")
    entries = interview(SYSTEM_QA)
    entries.append({"match": "[request:interviewer.srs]", "response": fenced({"sections": [
        {"heading": "Purpose", "body": "Code review agent.", "source_turns": [1, 2, 3]},
        {"heading": "Front-end Requirements", "body": "One markdown comment.", "source_turns": [4]}]})})
    entries.append({"match": "[request:coter.system_prompt]", "response": fenced(SYSTEM_DRAFT)})
    parts = ["role_definition", "knowledge", "tools", "context", "work_modes"]
    entries.append({"match": "[request:critic.review]", "response": fenced(critique(parts, False, "Name the severity levels."))})
    entries.append({"match": "[request:coter.system_prompt]", "response": fenced(SYSTEM_DRAFT)})
    entries.append({"match": "[request:critic.review]", "response": fenced(critique(parts, False, "Good."))})
    write(ROOT / "system" / "input.txt", initial)
    write(ROOT / "system" / "template.txt", initial.split("### OUTPUT TEMPLATE", 1)[1])
    write(ROOT / "system" / "transcript.json", {"entries": entries})


def judge_fixture():
    docs = {
        "s01.prd.md": "# Chat app PRD\nUsers send messages in rooms.\n",
        "s01.v2.prd.md": "# Chat app PRD v2\nUsers send messages in rooms and attach files.\n",
        "s02.prd.md": "# Todo PRD\nUsers keep a list of tasks.\n",
    }
    replies = {
        "s01.prd.md": fenced({"scores": {"Completeness": 3, "Clarity": 4, "Cohesiveness": 2},
                              "justifications": {"Completeness": "misses errors"}}),
        "s01.v2.prd.md": "Completeness: 4 covers files\nClarity: 3 some vague terms\nCohesiveness: 2 loose structure\n",
        "s02.prd.md": fenced({"scores": {"Completeness": 5, "Clarity": 5, "Cohesiveness": 4}}),
    }
    entries = []
    for name in sorted(docs):
        write(ROOT / "judge" / "docs" / name, docs[name])
        entries.append({"match": docs[name].splitlines()[0], "response": replies[name]})
    write(ROOT / "judge" / "transcript.json", {"entries": entries})
    write(ROOT / "judge" / "expected.csv",
          "scenario,criterion_1,criterion_2,criterion_3\ns01,3,4,2\ns01,4,3,2\ns02,5,5,4\n")
    write(ROOT / "judge" / "csuq_response.json", [4] * 19)


if __name__ == "__main__":
    game_fixture()
    retry_fixture()
    system_fixture()
    judge_fixture()
