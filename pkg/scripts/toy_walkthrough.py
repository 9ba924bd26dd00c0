"""Learn on the built-in toy database and predict on its held-out twin."""

from relboost import Background, BoostedRDN, example_data

bk = Background(
    modes=[
        "friends(+person,-person).",
        "friends(-person,+person).",
        "cancer(+person).",
        "smokes(+person).",
    ],
    use_std_logic_variables=True,
)

clf = BoostedRDN(background=bk, target="cancer")
clf.fit(example_data.train)

for atom, p in clf.predict_proba(example_data.test):
    print(f"{atom} {p:.6f}")
print()
print("\n".join(clf.listing()[:3]))
