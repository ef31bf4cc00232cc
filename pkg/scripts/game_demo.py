#!/usr/bin/env python3
"""Solve the model-checking game for a tiny system and print the winning play."""

from hyperlogic.formats import parse_kripke
from hyperlogic.hyperctl import PathBounds, build_game, check_bounded, solve_game
from hyperlogic.parser import parse_formula

K = parse_kripke("vertex u {a}\nvertex w\ninit u\nedge u u\nedge u w\nedge w w\n")
phi = parse_formula("exists p. !(a[p] U !a[p])")
bounds = PathBounds(1, 1)

game = build_game(phi, K, bounds)
res = solve_game(game)
print(f"{len(game.vertices)} vertices, winner {res.winner}, direct check {check_bounded(phi, K, bounds)}")
i = game.initial
while not game.is_terminal(i):
    v = game.vertices[i]
    print(f"#{i} {v.owner:<9} {v.describe()}")
    i = res.strategy.get(i, game.successors[i][0])
print(f"#{i} terminal  {game.vertices[i].describe()} -> {game.terminal_winner(i)}")
