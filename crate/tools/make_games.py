#!/usr/bin/env python3
"""Regenerate the bundled game descriptions under crates/iggp-core/games/."""

import os

ROOT = os.path.join(os.path.dirname(__file__), "..", "crates", "iggp-core", "games")


def write(path, text):
    full = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w") as f:
        f.write(text)
    print("wrote", full)


# --- rock_paper_scissors ----------------------------------------------------

RPS_GDL = """\
; rock_paper_scissors
; Reconstruction of the classic GGP competition game: two players play three
; simultaneous rounds; the round winner's score increments; draws leave both
; scores unchanged.
(role p1)
(role p2)

(succ 0 1)
(succ 1 2)
(succ 2 3)

(beats scissors paper)
(beats paper stone)
(beats stone scissors)

(init (score p1 0))
(init (score p2 0))
(init (step 0))

(<= (legal ?p stone) (role ?p))
(<= (legal ?p paper) (role ?p))
(<= (legal ?p scissors) (role ?p))

(<= (next (step ?n)) (true (step ?m)) (succ ?m ?n))
(<= (next (score ?p ?n)) (true (score ?p ?n)) (draws ?p))
(<= (next (score ?p ?n)) (true (score ?p ?n)) (loses ?p))
(<= (next (score ?p ?n)) (true (score ?p ?n2)) (succ ?n2 ?n) (wins ?p))

(<= (draws ?p) (does ?p ?a) (does ?q ?a) (distinct ?p ?q))
(<= (wins ?p) (does ?p ?a1) (does ?q ?a2) (distinct ?p ?q) (beats ?a1 ?a2))
(<= (loses ?p) (does ?p ?a1) (does ?q ?a2) (distinct ?p ?q) (beats ?a2 ?a1))

(<= (goal ?p ?n) (true (score ?p ?n)))

(<= terminal (true (step 3)))
"""

RPS_SIG = """\
# rock_paper_scissors
true, next, init :: prop -> bool.
legal, does :: agent -> action -> bool.
goal :: agent -> int -> bool.
terminal :: bool.
role :: agent -> bool.
succ :: int -> int -> bool.
beats :: action -> action -> bool.
draws, wins, loses :: agent -> bool.
score :: agent -> int -> prop.
step :: int -> prop.
p1, p2 :: agent.
stone, paper, scissors :: action.
0, 1, 2, 3 :: int.
"""

# --- minimal_decay ----------------------------------------------------------

DECAY_GDL = """\
; minimal_decay
; Reconstruction of the single-player GGP warm-up game: a stored value decays
; by one each step until it reaches zero; the reward is the current value.
(role you)

(succ 0 1)
(succ 1 2)
(succ 2 3)
(succ 3 4)
(succ 4 5)

(init (value 5))

(legal you noop)

(<= (next (value ?y)) (true (value ?x)) (succ ?y ?x))

(<= (goal you ?x) (true (value ?x)))

(<= terminal (true (value 0)))
"""

DECAY_SIG = """\
# minimal_decay
true, next, init :: prop -> bool.
legal, does :: agent -> action -> bool.
goal :: agent -> int -> bool.
terminal :: bool.
role :: agent -> bool.
succ :: int -> int -> bool.
value :: int -> prop.
you :: agent.
noop :: action.
0, 1, 2, 3, 4, 5 :: int.
"""

# --- buttons_and_lights -----------------------------------------------------

BUTTONS_GDL = """\
; buttons_and_lights
; Reconstruction of the GGP buttons puzzle: button a toggles lamp p, button b
; swaps lamps p and q, button c swaps lamps q and r. Light all three lamps
; before step 7 for the full reward.
(role robot)

(button a)
(button b)
(button c)

(light p)
(light q)
(light r)

(toggles a p)
(swaps b p q)
(swaps c q r)

(succ 1 2)
(succ 2 3)
(succ 3 4)
(succ 4 5)
(succ 5 6)
(succ 6 7)

(init (step 1))

(<= (legal robot ?b) (button ?b))

(<= (next (step ?y)) (true (step ?x)) (succ ?x ?y))
(<= (next (on ?l)) (does robot ?b) (toggles ?b ?l) (not (true (on ?l))))
(<= (next (on ?l)) (does robot ?b) (swaps ?b ?k ?l) (true (on ?k)))
(<= (next (on ?l)) (does robot ?b) (swaps ?b ?l ?k) (true (on ?k)))
(<= (next (on ?l)) (true (on ?l)) (does robot ?b) (not (affects ?b ?l)))

(<= (affects ?b ?l) (toggles ?b ?l))
(<= (affects ?b ?l) (swaps ?b ?l ?k))
(<= (affects ?b ?l) (swaps ?b ?k ?l))

(<= lit (true (on p)) (true (on q)) (true (on r)))

(<= (goal robot 100) lit)
(<= (goal robot 0) (not lit))

(<= terminal (true (step 7)))
"""

BUTTONS_SIG = """\
# buttons_and_lights
true, next, init :: prop -> bool.
legal, does :: agent -> action -> bool.
goal :: agent -> score -> bool.
terminal :: bool.
lit :: bool.
role :: agent -> bool.
succ :: num -> num -> bool.
button :: action -> bool.
light :: lamp -> bool.
toggles :: action -> lamp -> bool.
swaps :: action -> lamp -> lamp -> bool.
affects :: action -> lamp -> bool.
on :: lamp -> prop.
step :: num -> prop.
robot :: agent.
a, b, c :: action.
p, q, r :: lamp.
1, 2, 3, 4, 5, 6, 7 :: num.
0, 100 :: score.
"""

# --- fizz_buzz ----------------------------------------------------------------


def fizz_buzz_gdl():
    lines = [
        "; fizz_buzz",
        "; Reconstruction of the single-player GGP counting game: the counter runs",
        "; from 1 to 31; each step the player must say fizz (multiples of 3), buzz",
        "; (multiples of 5), fizzbuzz (multiples of 15), or otherwise the counter",
        "; value itself; correct answers increment the success tally that sets the",
        "; final reward band.",
        "(role player)",
        "",
        "(init (count 1))",
        "(init (success 0))",
        "",
    ]
    for i in range(0, 31):
        lines.append(f"(succ {i} {i + 1})")
    lines.append("")
    for n in range(0, 32):
        lines.append(f"(int {n})")
    lines.append("")
    for n in range(1, 32):
        lines.append(f"(positive_int {n})")
    lines.append("")
    for a in range(0, 32):
        for b in range(a + 1, 32):
            lines.append(f"(less_than {a} {b})")
    lines.append("")
    for a in range(1, 32):
        for b in range(1, a + 1):
            lines.append(f"(minus {a} {b} {a - b})")
    lines.append("")
    for n in range(1, 32):
        for d in range(1, n + 1):
            if n % d == 0:
                lines.append(f"(divisible {n} {d})")
    lines.append("")
    for n in range(0, 31):
        lines.append(f"(input player (say {n}))")
    for w in ("fizz", "buzz", "fizzbuzz"):
        lines.append(f"(input player (say {w}))")
    lines.append("")
    lines.extend(
        [
            "(legal player (say fizz))",
            "(legal player (say buzz))",
            "(legal player (say fizzbuzz))",
            "(<= (legal player (say ?n)) (true (count ?n)) (input player (say ?n)))",
            "",
            "(<= (next (count ?m)) (true (count ?n)) (succ ?n ?m))",
            "(<= (next (success ?m)) correct (true (success ?n)) (succ ?n ?m))",
            "(<= (next (success ?n)) (not correct) (true (success ?n)))",
            "",
            "(<= correct (true (count ?n)) (divisible ?n 15) (does player (say fizzbuzz)))",
            "(<= correct (true (count ?n)) (divisible ?n 3) (not (divisible ?n 5)) (does player (say fizz)))",
            "(<= correct (true (count ?n)) (divisible ?n 5) (not (divisible ?n 3)) (does player (say buzz)))",
            "(<= correct (true (count ?n)) (not (divisible ?n 3)) (not (divisible ?n 5)) (does player (say ?n)))",
            "",
            "(<= (goal player 100) (true (success 30)))",
            "(<= (goal player 75) (true (success ?s)) (less_than ?s 30) (less_than 24 ?s))",
            "(<= (goal player 50) (true (success ?s)) (less_than ?s 25) (less_than 19 ?s))",
            "(<= (goal player 25) (true (success ?s)) (less_than ?s 20) (less_than 14 ?s))",
            "(<= (goal player 0) (true (success ?s)) (less_than ?s 15))",
            "",
            "(<= terminal (true (count 31)))",
            "",
        ]
    )
    return "\n".join(lines)


def fizz_buzz_sig():
    saynums = ", ".join(str(n) for n in range(0, 31) if n not in (0, 25))
    return f"""\
# fizz_buzz
# The numerals 0 and 25 double as reward values, so they carry their own
# result type that sits below sayable, int, and score.
true, next, init :: prop -> bool.
legal, does, input :: agent -> action -> bool.
goal :: agent -> score -> bool.
terminal :: bool.
correct :: bool.
role :: agent -> bool.
succ, less_than, divisible :: int -> int -> bool.
minus :: int -> int -> int -> bool.
positive_int, int :: int -> bool.
count, success :: int -> prop.
say :: sayable -> action.
player :: agent.
fizz, buzz, fizzbuzz :: sayword.
{saynums} :: saynum.
0, 25 :: scorenum.
31 :: int.
50, 75, 100 :: bigscore.
sayword :> sayable.
saynum :> sayable.
saynum :> int.
scorenum :> sayable.
scorenum :> int.
scorenum :> score.
bigscore :> score.
"""


write("rock_paper_scissors/game.gdl", RPS_GDL)
write("rock_paper_scissors/signature.sig", RPS_SIG)
write("minimal_decay/game.gdl", DECAY_GDL)
write("minimal_decay/signature.sig", DECAY_SIG)
write("buttons_and_lights/game.gdl", BUTTONS_GDL)
write("buttons_and_lights/signature.sig", BUTTONS_SIG)
write("fizz_buzz/game.gdl", fizz_buzz_gdl())
write("fizz_buzz/signature.sig", fizz_buzz_sig())
