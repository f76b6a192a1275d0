"""Small closed word lists used by the rule-based text machinery.

Everything here is a heuristic lexicon, not a tagger: the goal is stable,
deterministic token classification that behaves identically on an original
sentence and on its paraphrase candidates, which is what the downstream
matching actually depends on.
"""
from __future__ import annotations

from fractions import Fraction

# Number words: 0-20 plus the tens.  Larger number words stay ordinary words
# (the supported datasets use digits almost exclusively).
NUMBER_WORDS: dict[str, Fraction] = {
    "zero": Fraction(0), "one": Fraction(1), "two": Fraction(2), "three": Fraction(3),
    "four": Fraction(4), "five": Fraction(5), "six": Fraction(6), "seven": Fraction(7),
    "eight": Fraction(8), "nine": Fraction(9), "ten": Fraction(10), "eleven": Fraction(11),
    "twelve": Fraction(12), "thirteen": Fraction(13), "fourteen": Fraction(14),
    "fifteen": Fraction(15), "sixteen": Fraction(16), "seventeen": Fraction(17),
    "eighteen": Fraction(18), "nineteen": Fraction(19), "twenty": Fraction(20),
    "thirty": Fraction(30), "forty": Fraction(40), "fifty": Fraction(50),
    "sixty": Fraction(60), "seventy": Fraction(70), "eighty": Fraction(80),
    "ninety": Fraction(90),
}

TENS_WORDS = {"twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"}

PRONOUNS_MALE = {"he", "him", "his", "himself"}
PRONOUNS_FEMALE = {"she", "her", "hers", "herself"}
PRONOUNS_PLURAL = {"they", "them", "their", "theirs", "themselves"}
PRONOUNS_NEUTER = {"it", "its", "itself"}
PRONOUNS_THIRD = PRONOUNS_MALE | PRONOUNS_FEMALE | PRONOUNS_PLURAL | PRONOUNS_NEUTER
# possessive forms that turn into "<Name>'s" when resolved
PRONOUNS_POSSESSIVE = {"his", "her", "hers", "their", "theirs", "its"}

ALL_PRONOUNS = PRONOUNS_THIRD | {
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves",
}

# Function words: never nouns, never proper nouns.  Mixed bag of determiners,
# prepositions, conjunctions, wh-words and common adverbs seen in MWP prose.
FUNCTION_WORDS: set[str] = ALL_PRONOUNS | {
    "a", "an", "the", "this", "that", "these", "those", "each", "every", "some",
    "any", "no", "all", "both", "another", "other", "others", "more", "most",
    "much", "many", "few", "little", "several", "enough", "such", "same", "own",
    "of", "in", "on", "at", "by", "for", "with", "without", "off", "over",
    "under", "to", "from", "into", "onto", "per", "than", "about", "after",
    "before", "during", "between", "among", "through", "around", "near", "up",
    "down", "out", "away", "back",
    "and", "but", "or", "nor", "so", "yet", "if", "then", "when", "while",
    "because", "since", "although", "though", "unless", "until", "as",
    "how", "what", "where", "why", "who", "whom", "whose", "which",
    "not", "there", "here", "now", "just", "also", "only", "very", "too",
    "still", "again", "once", "twice", "together", "apart", "instead",
    "previously", "already", "later", "earlier", "soon", "yesterday", "today",
    "tomorrow", "first", "last", "next",
    "yes", "ok",
}

# Verbs that neither end in -ed nor -ing; the morphology heuristics in
# looks_like_verb() cover regular past/progressive forms.
VERBS: set[str] = {
    "be", "am", "is", "are", "was", "were", "been", "being",
    "do", "does", "did", "done", "have", "has", "had", "having",
    "will", "would", "can", "could", "shall", "should", "may", "might", "must",
    "get", "gets", "got", "gotten", "make", "makes", "made", "take", "takes",
    "took", "taken", "give", "gives", "gave", "given", "go", "goes", "went",
    "gone", "come", "comes", "came", "buy", "buys", "bought", "sell", "sells",
    "sold", "spend", "spends", "spent", "cut", "cuts", "put", "puts", "let",
    "lets", "read", "reads", "run", "runs", "ran", "hold", "holds", "held",
    "keep", "keeps", "kept", "find", "finds", "found", "leave", "leaves",
    "left", "lose", "loses", "lost", "win", "wins", "won", "pay", "pays",
    "paid", "say", "says", "said", "see", "sees", "saw", "seen", "tell",
    "tells", "told", "think", "thinks", "thought", "bring", "brings",
    "brought", "send", "sends", "sent", "sit", "sits", "sat", "stand",
    "stands", "stood", "eat", "eats", "ate", "eaten", "drink", "drinks",
    "drank", "write", "writes", "wrote", "written", "grow", "grows", "grew",
    "grown", "know", "knows", "knew", "known", "meet", "meets", "met", "feed",
    "feeds", "fed", "need", "needs", "want", "wants", "earn", "earns", "own",
    "owns", "contain", "contains", "cost", "costs", "weigh", "weighs",
    "measure", "measures", "equal", "equals", "remain", "remains", "stay",
    "stays", "become", "becomes", "became", "begin", "begins", "began",
    "start", "starts", "end", "ends", "seem", "seems", "show", "shows",
    "shown", "grade", "grades", "recycle", "recycles", "mow", "mows",
    "store", "stores", "turn", "turns", "score", "scores", "solve", "solves",
    "use", "uses", "share", "shares",
}

# -ing words that are ordinary nouns, excluded from the -ing verb heuristic
ING_NOUNS = {
    "morning", "evening", "something", "nothing", "anything", "everything",
    "king", "ring", "spring", "string", "wing", "thing", "building",
    "ceiling", "painting", "drawing",
}

# Common given names with gender, used to recognize sentence-initial proper
# nouns as coreference antecedents.  Deliberately small: an unlisted name at
# the start of a sentence simply is not treated as an antecedent.
MALE_NAMES = {
    "james", "john", "robert", "michael", "william", "david", "richard",
    "joseph", "thomas", "charles", "mark", "paul", "steven", "andrew",
    "kenneth", "george", "eric", "adam", "henry", "sam", "tim", "timothy",
    "tom", "mike", "oliver", "dennis", "jack", "luke", "ryan", "kevin",
    "brian", "jason", "justin", "brandon", "frank", "peter", "carl", "fred",
    "ted", "bill", "bob", "joe", "dan", "dave", "jim", "alex", "max", "leo",
    "oscar", "victor", "seth", "evan", "cody", "marcus", "ned", "keith",
}
FEMALE_NAMES = {
    "mary", "patricia", "linda", "barbara", "elizabeth", "jennifer", "maria",
    "susan", "margaret", "lisa", "nancy", "karen", "betty", "helen", "sandra",
    "donna", "carol", "ruth", "sharon", "michelle", "laura", "sarah", "sara",
    "kim", "amy", "angela", "melissa", "brenda", "emma", "olivia", "sophia",
    "isabella", "mia", "charlotte", "amelia", "emily", "abigail", "megan",
    "hannah", "rachel", "kate", "jane", "lucy", "anna", "alice", "wendy",
    "joan", "grace", "ellen", "faye", "paula", "nina",
}
NAME_GENDER: dict[str, str] = {n: "m" for n in MALE_NAMES}
NAME_GENDER.update({n: "f" for n in FEMALE_NAMES})


def singularize(word: str) -> str:
    """Strip common plural suffixes.  Stable, not linguistically complete."""
    w = word.lower()
    if len(w) > 3 and w.endswith("ies"):
        return w[:-3] + "y"
    if len(w) > 3 and w.endswith(("ches", "shes", "sses", "xes", "zes", "oes")):
        return w[:-2]
    if len(w) > 1 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


def looks_like_verb(token: str) -> bool:
    t = token.lower()
    if t in VERBS:
        return True
    if len(t) > 3 and t.endswith("ed"):
        return True
    if len(t) > 4 and t.endswith("ing") and t not in ING_NOUNS:
        return True
    return False


def is_number_token(token: str) -> bool:
    t = token.lower()
    return bool(token) and (token[0].isdigit() or t in NUMBER_WORDS)


def looks_like_noun(token: str) -> bool:
    """Content word that is neither a function word, a verb form, nor a number."""
    t = token.rstrip("'’").lower()
    if t.endswith(("'s", "’s")):
        t = t[:-2]
    if not t or not t.replace("'", "").replace("’", "").isalpha():
        return False
    if t in FUNCTION_WORDS or t in NUMBER_WORDS:
        return False
    return not looks_like_verb(t)
