"""Freeze the golden prompt files under tests/fixtures/.

Run once after any deliberate template change; tests compare byte-exactly.
"""

from __future__ import annotations

import pathlib

from scc.promptgen import build_prompt
from scc.retrieval import Demonstration

DEMOS = [
    Demonstration(
        "transfer_gold",
        "function transferGold(address to, uint256 value) public returns (bool) {\n"
        "    require(to != address(0));\n"
        "    goldBalances[msg.sender] -= value;\n"
        "    goldBalances[to] += value;\n"
        "    return true;\n"
        "}",
        "transfer gold tokens to the given address",
        0.12,
        0.91,
    ),
    Demonstration(
        "transfer_silver",
        "function transferSilver(address to, uint256 value) public returns (bool) {\n"
        "    require(to != address(0));\n"
        "    silverBalances[msg.sender] -= value;\n"
        "    silverBalances[to] += value;\n"
        "    return true;\n"
        "}",
        "transfer silver tokens to the given address",
        0.19,
        0.84,
    ),
    Demonstration(
        "approve_gold",
        "function approveGold(address spender, uint256 value) public returns (bool) {\n"
        "    goldAllowed[msg.sender][spender] = value;\n"
        "    return true;\n"
        "}",
        "approve the spender to withdraw gold tokens",
        0.31,
        0.52,
    ),
    Demonstration(
        "balance_gold",
        "function goldBalanceOf(address owner) public view returns (uint256) {\n"
        "    return goldBalances[owner];\n"
        "}",
        "returns the gold balance of the owner",
        0.44,
        0.40,
    ),
    Demonstration(
        "pause_gold",
        "function pauseGold() public {\n"
        "    require(!goldPaused);\n"
        "    goldPaused = true;\n"
        "}",
        "pause the gold operations until resumed",
        0.58,
        0.33,
    ),
]

QUERY = (
    "function transferToken(address to, uint256 value) public returns (bool) {\n"
    "    require(to != address(0));\n"
    "    tokenBalances[msg.sender] -= value;\n"
    "    tokenBalances[to] += value;\n"
    "    return true;\n"
    "}"
)


def main() -> None:
    fixtures = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    for mode, name in (("zero", "golden_prompt_zero.txt"),
                       ("one", "golden_prompt_one.txt"),
                       ("few", "golden_prompt_few.txt")):
        rendered = build_prompt(QUERY, DEMOS, mode=mode)
        (fixtures / name).write_text(rendered.text, encoding="utf-8")
        print(f"--- {name} (demos={rendered.demo_count}, cap={rendered.length_cap_words})")
        print(rendered.text)


if __name__ == "__main__":
    main()
