"""Regenerate data/synthetic_corpus.jsonl, the 60-pair offline test corpus.

Deterministic: combines a bank of Solidity method templates with name and
type substitutions, including near-clone families so retrieval has real
structure to exploit.
"""

from __future__ import annotations

import json
import pathlib

TEMPLATES = [
    (
        "transfer_{asset}",
        "function transfer{Asset}(address to, uint256 value) public returns (bool) {{\n"
        "    require(to != address(0));\n"
        "    require(value <= {asset}Balances[msg.sender]);\n"
        "    {asset}Balances[msg.sender] -= value;\n"
        "    {asset}Balances[to] += value;\n"
        "    emit Transfer(msg.sender, to, value);\n"
        "    return true;\n"
        "}}",
        "transfer {asset} tokens to the given address",
    ),
    (
        "approve_{asset}",
        "function approve{Asset}(address spender, uint256 value) public returns (bool) {{\n"
        "    {asset}Allowed[msg.sender][spender] = value;\n"
        "    emit Approval(msg.sender, spender, value);\n"
        "    return true;\n"
        "}}",
        "approve the spender to withdraw {asset} tokens",
    ),
    (
        "balance_of_{asset}",
        "function {asset}BalanceOf(address owner) public view returns (uint256) {{\n"
        "    return {asset}Balances[owner];\n"
        "}}",
        "returns the {asset} balance of the owner",
    ),
    (
        "mint_{asset}",
        "function mint{Asset}(address account, uint256 amount) internal {{\n"
        "    require(account != address(0));\n"
        "    {asset}Supply += amount;\n"
        "    {asset}Balances[account] += amount;\n"
        "    emit Transfer(address(0), account, amount);\n"
        "}}",
        "mint new {asset} tokens for the account",
    ),
    (
        "burn_{asset}",
        "function burn{Asset}(address account, uint256 amount) internal {{\n"
        "    require(account != address(0));\n"
        "    {asset}Balances[account] -= amount;\n"
        "    {asset}Supply -= amount;\n"
        "    emit Transfer(account, address(0), amount);\n"
        "}}",
        "burn {asset} tokens from the given account",
    ),
    (
        "only_{role}",
        "modifier only{Role}() {{\n"
        "    require(msg.sender == {role}Address);\n"
        "    _;\n"
        "}}",
        "restricts the call to the {role} address only",
    ),
    (
        "set_{role}",
        "function set{Role}(address newAddress) public {{\n"
        "    require(newAddress != address(0));\n"
        "    {role}Address = newAddress;\n"
        "    emit RoleChanged(newAddress);\n"
        "}}",
        "update the stored {role} address after validation",
    ),
    (
        "pause_{unit}",
        "function pause{Unit}() public {{\n"
        "    require(!{unit}Paused);\n"
        "    {unit}Paused = true;\n"
        "    emit Paused(msg.sender);\n"
        "}}",
        "pause the {unit} operations until resumed",
    ),
    (
        "withdraw_{unit}",
        "function withdraw{Unit}(uint256 amount) public {{\n"
        "    require(amount <= {unit}Deposits[msg.sender]);\n"
        "    {unit}Deposits[msg.sender] -= amount;\n"
        "    msg.sender.transfer(amount);\n"
        "    emit Withdrawal(msg.sender, amount);\n"
        "}}",
        "withdraw the requested amount from the {unit} deposit",
    ),
    (
        "sum_{unit}",
        "function total{Unit}(uint256[] memory values) public pure returns (uint256) {{\n"
        "    uint256 total = 0;\n"
        "    for (uint256 i = 0; i < values.length; i++) {{\n"
        "        total += values[i];\n"
        "    }}\n"
        "    return total;\n"
        "}}",
        "sum all {unit} values in the array",
    ),
]

NAMES = ["token", "gold", "silver", "reward", "stake", "vote"]


def build_pairs() -> list[dict]:
    pairs = []
    for name in NAMES:
        for slug, code_tpl, comment_tpl in TEMPLATES:
            fills = {
                "asset": name, "Asset": name.capitalize(),
                "role": name, "Role": name.capitalize(),
                "unit": name, "Unit": name.capitalize(),
            }
            pairs.append(
                {
                    "id": slug.format(**fills),
                    "code": code_tpl.format(**fills),
                    "comment": comment_tpl.format(**fills),
                }
            )
    return pairs


def main() -> None:
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic_corpus.jsonl"
    out.parent.mkdir(exist_ok=True)
    pairs = build_pairs()
    assert len(pairs) == 60, len(pairs)
    assert len({p["id"] for p in pairs}) == 60
    with open(out, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair, ensure_ascii=False) + "\n")
    print(f"wrote {len(pairs)} pairs to {out}")


if __name__ == "__main__":
    main()
