import json
import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"

# Reference problems used across the suite.  QR targets are the known-good
# reordered texts (compared token-wise, connective case and terminal
# punctuation normalized).
TIM_MIKE = {
    "text": "Tim has 5 books. Mike has 7 books. How many books do they have together?",
    "equation": "X = 5+7",
    "answer": 12,
    "qr": "How many books do they have together given that Tim has 5 books and Mike has 7 books?",
    "sp": "Tim has got 5 books. There are 7 books in Mike's possession. How many books do they have?",
}
TEACHER = {
    "text": "A teacher had 7 worksheets to grade . If she graded 3 , but then another 4 were turned in, how many worksheets would she have to grade ?",
    "answer": 8,
    "qr": "How many worksheets would she have to grade given that a teacher had 7 worksheets to grade and if she graded 3 but then another 4 were turned in?",
}
GWEN = {
    "text": "Gwen earned 20 points for each bag of cans she recycled . If she had 10 bags, but didn’t recycle 3 of them , how many points would she have earned ?",
    "equation": "X = (20*(10-3))",
    "answer": 140,
    "qr": "How many points would she have earned given that Gwen earned 20 points for each bag of cans she recycled and if she had 10 bags but didn’t recycle 3 of them ?",
}
DENNIS = {
    "text": "Dennis has 12 pencils stored in boxes. If there are 3 boxes, how many pencils must go in each box?",
    "equation": "X = 12/3",
    "answer": 4,
    "qr": "If there are 3 boxes, how many pencils must go in each box given that Dennis has 12 pencils stored in boxes ?",
}
OLIVER = {
    "text": "Oliver made 10 dollars mowing lawns over the summer . If he spent 4 dollars buying new mower blades. How many 3 dollar games could he buy with the money he had left ?",
    "equation": "X = (10-4)/3",
    "answer": 2,
    "qr": "How many 3 dollar games could Oliver buy with the money he had left given that Oliver made 10 dollars mowing lawns over the summer and if he spent 4 dollars buying new mower blades.",
}
TAILOR = {
    "text": "A tailor cut 15 of an inch off a skirt and 5 of an inch off a pair of pants . How much more did the tailor cut off the skirt than the pants ?",
    "equation": "X = 15-5",
    "answer": 10,
}
VASE = {
    "text": "A vase can hold 10 flowers . If you had 5 carnations and 5 roses, how many vases would you need to hold the flowers?",
    "equation": "X = (5+5)/10",
    "answer": 1,
}

FIXTURE_PROBLEMS = [TIM_MIKE, TEACHER, GWEN, DENNIS, OLIVER, TAILOR, VASE]


@pytest.fixture(scope="session")
def corpus20():
    records = []
    with open(DATA_DIR / "corpus20.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


@pytest.fixture(scope="session")
def solver_script20():
    with open(DATA_DIR / "solver_script20.json", encoding="utf-8") as fh:
        return json.load(fh)
