"""
Weak labels, precision-fixed threshold and the filtering report
===============================================================

1. Pick seed skills from crowd votes: mostly-negative skills and never-negative
   skills.
2. Mine weakly labeled snippets for them, dropping negative snippets whose
   context says "candidate", "individual" or "looking for".
3. Train a classifier, then choose the decision threshold that keeps
   precision at or above 95% with the best recall.
4. Count, per skill, how many matches survive the filter.

The corpus here is synthetic: two skills used mostly about companies, two
used about candidates, and context words that hint at which.
"""
import numpy as np

from softskill.augment import AnnotationRecord, mine_weak_labels, select_seed_skills
from softskill.evaluation import calibrate_threshold, evaluate_scores, filter_counts, naive_baseline
from softskill.matcher import Snippet
from softskill.model import TrainConfig, predict_proba, train
from softskill.represent import represent

rng = np.random.default_rng(0)
skill_names = {0: "dynamic", 1: "innovative", 2: "reliable", 3: "patient"}
company_ctx = ["our", "company", "offer", "product", "environment", "team", "salary"]
person_ctx = ["you", "must", "be", "applicant", "should", "candidate", "individual", "looking", "for"]


def make_snippet(k, skill_id, about_candidate):
    pool = person_ctx if about_candidate else company_ctx
    left = tuple(rng.choice(pool, size=int(rng.integers(2, 8))))
    right = tuple(rng.choice(pool + company_ctx, size=int(rng.integers(2, 8))))
    return Snippet(left, (skill_names[skill_id],), right, skill_id, f"doc:{k}")


corpus, truth = [], []
for k in range(3000):
    sid = int(rng.integers(4))
    about = rng.random() < (0.15 if sid < 2 else 0.95)
    corpus.append(make_snippet(k, sid, about))
    truth.append(int(about))

annotations = [AnnotationRecord(0, 2, 8), AnnotationRecord(1, 1, 9),
               AnnotationRecord(2, 6, 0), AnnotationRecord(3, 4, 0)]
negative_seeds, positive_seeds = select_seed_skills(annotations, neg_ratio=0.7)
print("negative seeds:", negative_seeds, "positive seeds:", positive_seeds)

weak = mine_weak_labels(corpus[:2000], negative_seeds, "negative", limit=600)
weak += mine_weak_labels(corpus[:2000], positive_seeds, "positive", limit=600)
train_set = [represent(s, "tagged", label=y) for s, y in weak]
model, log = train(train_set, TrainConfig(model_kind="cnn", mode="tagged", embedding_dim=32,
                                          filters_per_width=20, max_epochs=20, seed=0))
print(f"trained {log.best_epoch} epochs, validation F1-weighted {log.best['val_f1_weighted']:.3f}")

# Held-out "hand-annotated" test set with the true labels.
test = [represent(s, "tagged", label=y) for s, y in zip(corpus[2000:], truth[2000:])]
scores = predict_proba(model, test)
labels = np.array(truth[2000:])
print(f"naive precision: {naive_baseline(labels)[0]:.3f} at recall 1.0")
cal = calibrate_threshold(scores, labels, target_precision=0.95)
print(f"threshold {cal.threshold:.3f}: precision {cal.precision:.3f} recall {cal.recall:.3f}"
      f"{' (target not reached)' if cal.target_unattained else ''}")
print("\n".join(evaluate_scores(scores, labels, 0.95).as_lines()))

for row in filter_counts([s.skill_id for s in corpus[2000:]], scores, cal.threshold):
    print(f"{skill_names[row.skill_id]:>12}  raw {row.raw_count:4d}  kept {row.filtered_count:4d}")
