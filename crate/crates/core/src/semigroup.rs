//! Budgeted breadth-first exploration of the multiplicative semigroup
//! generated by the digit matrices, and spanning-word searches over the
//! reachable row space and co-reachable column space.
//!
//! Exploration is deterministic: words are visited by length, then
//! lexicographically within a length, so witnesses are canonical and two
//! runs on equal inputs produce identical orderings.

use crate::error::{Error, Result};
use crate::linrep::LinearRepresentation;
use crate::matrix::{IntMatrix, RowSpan};
use crate::spectral::{classify, Classification, SpectralReport};
use crate::word::Word;
use num_bigint::BigInt;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct ExplorationBudget {
    pub max_elements: usize,
    pub max_entry_abs: BigInt,
}

impl Default for ExplorationBudget {
    fn default() -> Self {
        // element count and entry magnitude are independent axes: slow
        // semigroups exhaust memory before entries explode, and vice versa
        ExplorationBudget {
            max_elements: 100_000,
            max_entry_abs: BigInt::from(10).pow(50),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExplorationStatus {
    /// The found set is product-closed; the payload is its size.
    Closed(usize),
    /// A generated element of infinite order, with its shortest-then-lex
    /// generating word (digits index the generators).
    Infinite {
        word: Vec<u32>,
        report: SpectralReport,
    },
    BudgetExceeded(String),
}

#[derive(Debug)]
pub struct SemigroupExploration {
    pub generators: Vec<IntMatrix>,
    /// Every distinct product found, with a shortest generating word,
    /// in discovery (length-then-lex) order.
    pub elements: Vec<(Vec<u32>, IntMatrix)>,
    pub status: ExplorationStatus,
    pub budget: ExplorationBudget,
}

impl SemigroupExploration {
    /// Exhaustive closure check; meaningful after a Closed status.
    pub fn is_product_closed(&self) -> bool {
        let keys: std::collections::HashSet<Vec<u8>> = self
            .elements
            .iter()
            .map(|(_, m)| m.canonical_bytes())
            .collect();
        self.elements.iter().all(|(_, m)| {
            self.generators
                .iter()
                .all(|g| keys.contains(&m.mul(g).canonical_bytes()))
        })
    }
}

fn check_generators(generators: &[IntMatrix]) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Err(Error::DimensionMismatch(
            "at least one generator is required".into(),
        ));
    };
    if !first.is_square() {
        return Err(Error::DimensionMismatch("generators must be square".into()));
    }
    let d = first.rows();
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "generator {} is {}x{}, expected {}x{}",
                i,
                g.rows(),
                g.cols(),
                d,
                d
            )));
        }
    }
    Ok(d)
}

/// BFS closure of the generated semigroup. Each new product is
/// deduplicated exactly and classified; the search stops at the first
/// element that is not of finite order, when the set closes, or when a
/// budget trips.
pub fn explore(
    generators: &[IntMatrix],
    budget: &ExplorationBudget,
) -> Result<SemigroupExploration> {
    let search = search_witnesses(generators, budget, 1)?;
    let status = match search.terminal {
        SearchTerminal::FoundEnough => {
            let (word, report) = search
                .witnesses
                .into_iter()
                .next()
                .expect("witness present");
            ExplorationStatus::Infinite { word, report }
        }
        SearchTerminal::Closed(size) => ExplorationStatus::Closed(size),
        SearchTerminal::BudgetExceeded(why) => ExplorationStatus::BudgetExceeded(why),
    };
    Ok(SemigroupExploration {
        generators: generators.to_vec(),
        elements: search.elements,
        status,
        budget: budget.clone(),
    })
}

#[derive(Debug)]
pub enum InfiniteOrderSearch {
    Found {
        word: Vec<u32>,
        report: SpectralReport,
    },
    /// The semigroup closed; no element has infinite order.
    SemigroupFinite(usize),
    /// The budget stopped the search first. The search is sound but not
    /// complete, so this outcome is reported rather than silently mapped
    /// to "finite".
    BudgetExceeded(String),
}

/// First infinite-order element in canonical order, if the budget allows
/// one to be found.
pub fn find_infinite_order_element(
    generators: &[IntMatrix],
    budget: &ExplorationBudget,
) -> Result<InfiniteOrderSearch> {
    let exploration = explore(generators, budget)?;
    Ok(match exploration.status {
        ExplorationStatus::Infinite { word, report } => {
            InfiniteOrderSearch::Found { word, report }
        }
        ExplorationStatus::Closed(size) => InfiniteOrderSearch::SemigroupFinite(size),
        ExplorationStatus::BudgetExceeded(why) => {
            InfiniteOrderSearch::BudgetExceeded(why)
        }
    })
}

pub(crate) enum SearchTerminal {
    FoundEnough,
    Closed(usize),
    BudgetExceeded(String),
}

pub(crate) struct WitnessSearch {
    pub elements: Vec<(Vec<u32>, IntMatrix)>,
    pub witnesses: Vec<(Vec<u32>, SpectralReport)>,
    pub terminal: SearchTerminal,
}

/// BFS that keeps going until `max_witnesses` infinite-order elements have
/// been collected (in canonical order), the semigroup closes, or a budget
/// trips.
pub(crate) fn search_witnesses(
    generators: &[IntMatrix],
    budget: &ExplorationBudget,
    max_witnesses: usize,
) -> Result<WitnessSearch> {
    check_generators(generators)?;
    let mut elements: Vec<(Vec<u32>, IntMatrix)> = Vec::new();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut witnesses: Vec<(Vec<u32>, SpectralReport)> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();

    let admit = |elements: &mut Vec<(Vec<u32>, IntMatrix)>,
                     seen: &mut HashMap<Vec<u8>, usize>,
                     witnesses: &mut Vec<(Vec<u32>, SpectralReport)>,
                     word: Vec<u32>,
                     matrix: IntMatrix|
     -> std::result::Result<Option<usize>, SearchTerminal> {
        let key = matrix.canonical_bytes();
        if seen.contains_key(&key) {
            return Ok(None);
        }
        if elements.len() + 1 > budget.max_elements {
            return Err(SearchTerminal::BudgetExceeded(format!(
                "element budget {} exhausted",
                budget.max_elements
            )));
        }
        if matrix.max_abs_entry() > budget.max_entry_abs {
            return Err(SearchTerminal::BudgetExceeded(
                "entry magnitude budget exhausted".into(),
            ));
        }
        let report = classify(&matrix);
        let idx = elements.len();
        seen.insert(key, idx);
        elements.push((word.clone(), matrix));
        if report.classification != Classification::FiniteOrder {
            witnesses.push((word, report));
            if witnesses.len() >= max_witnesses {
                return Err(SearchTerminal::FoundEnough);
            }
        }
        Ok(Some(idx))
    };

    // length-1 layer: the generators themselves, in digit order
    for (g, matrix) in generators.iter().enumerate() {
        match admit(
            &mut elements,
            &mut seen,
            &mut witnesses,
            vec![g as u32],
            matrix.clone(),
        ) {
            Ok(Some(idx)) => frontier.push(idx),
            Ok(None) => {}
            Err(terminal) => {
                return Ok(WitnessSearch {
                    elements,
                    witnesses,
                    terminal,
                })
            }
        }
    }

    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &idx in &frontier {
            for (g, generator) in generators.iter().enumerate() {
                let (word, matrix) = &elements[idx];
                let mut new_word = word.clone();
                new_word.push(g as u32);
                let product = matrix.mul(generator);
                match admit(&mut elements, &mut seen, &mut witnesses, new_word, product)
                {
                    Ok(Some(new_idx)) => next.push(new_idx),
                    Ok(None) => {}
                    Err(terminal) => {
                        return Ok(WitnessSearch {
                            elements,
                            witnesses,
                            terminal,
                        })
                    }
                }
            }
        }
        frontier = next;
    }

    let size = elements.len();
    let terminal = if witnesses.is_empty() {
        SearchTerminal::Closed(size)
    } else {
        // witnesses were found but fewer than requested before closure;
        // unreachable in practice since an infinite-order element keeps
        // generating new powers, but handle it anyway
        SearchTerminal::FoundEnough
    };
    Ok(WitnessSearch {
        elements,
        witnesses,
        terminal,
    })
}

/// Words whose row images row * A_w form a basis of the reachable
/// subspace, collected breadth-first (length, then lex). The search stops
/// once one whole extra generation adds nothing to the span, which makes
/// the span invariant under every digit matrix.
pub fn spanning_prefixes(rep: &LinearRepresentation) -> Vec<Word> {
    let d = rep.dim();
    let mut span = RowSpan::new(d);
    let mut kept: Vec<(Vec<u32>, Vec<BigInt>)> = Vec::new();
    if span.insert(rep.row()) {
        kept.push((Vec::new(), rep.row().to_vec()));
    }
    let mut frontier: Vec<usize> = (0..kept.len()).collect();
    while !frontier.is_empty() && span.dim() < d {
        let mut next = Vec::new();
        for &idx in &frontier {
            for digit in 0..rep.base() {
                let image = rep.matrix(digit).vec_mul(&kept[idx].1);
                if span.insert(&image) {
                    let mut word = kept[idx].0.clone();
                    word.push(digit);
                    kept.push((word, image));
                    next.push(kept.len() - 1);
                }
            }
        }
        frontier = next;
    }
    kept.into_iter()
        .map(|(digits, _)| Word::new(rep.base(), digits).expect("digits in range"))
        .collect()
}

/// Words whose column images A_w * col form a basis of the co-reachable
/// subspace. Extending a word on the left prepends a digit, so candidates
/// of the next length are generated digit-major to stay lexicographic.
pub fn spanning_suffixes(rep: &LinearRepresentation) -> Vec<Word> {
    let d = rep.dim();
    let mut span = RowSpan::new(d);
    let mut kept: Vec<(Vec<u32>, Vec<BigInt>)> = Vec::new();
    if span.insert(rep.col()) {
        kept.push((Vec::new(), rep.col().to_vec()));
    }
    let mut frontier: Vec<usize> = (0..kept.len()).collect();
    while !frontier.is_empty() && span.dim() < d {
        let mut next = Vec::new();
        for digit in 0..rep.base() {
            for &idx in &frontier {
                let image = rep.matrix(digit).mul_vec(&kept[idx].1);
                if span.insert(&image) {
                    let mut word = vec![digit];
                    word.extend_from_slice(&kept[idx].0);
                    kept.push((word, image));
                    next.push(kept.len() - 1);
                }
            }
        }
        frontier = next;
    }
    kept.into_iter()
        .map(|(digits, _)| Word::new(rep.base(), digits).expect("digits in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{builtin, Builtin};
    use num_traits::One;

    fn tm_generators() -> Vec<IntMatrix> {
        builtin(Builtin::ThueMorse).unwrap().matrices().to_vec()
    }

    fn s2_generators() -> Vec<IntMatrix> {
        builtin(Builtin::DigitSum(2)).unwrap().matrices().to_vec()
    }

    #[test]
    fn thue_morse_closes() {
        let exploration = explore(&tm_generators(), &ExplorationBudget::default()).unwrap();
        let ExplorationStatus::Closed(size) = exploration.status else {
            panic!("expected closure, got {:?}", exploration.status);
        };
        assert_eq!(size, 2);
        assert!(exploration.is_product_closed());
    }

    #[test]
    fn digit_sum_is_infinite_with_canonical_witness() {
        let exploration = explore(&s2_generators(), &ExplorationBudget::default()).unwrap();
        let ExplorationStatus::Infinite { word, report } = &exploration.status else {
            panic!("expected infinite witness");
        };
        assert_eq!(word, &vec![1]);
        assert_eq!(report.classification, Classification::LinearGrowth);
    }

    #[test]
    fn single_rotation_generator_closes_at_four() {
        let rot = IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
        let exploration =
            explore(std::slice::from_ref(&rot), &ExplorationBudget::default()).unwrap();
        let ExplorationStatus::Closed(size) = exploration.status else {
            panic!("expected closure");
        };
        assert_eq!(size, 4);
        assert!(exploration.is_product_closed());
    }

    #[test]
    fn mismatched_generators_are_rejected() {
        let gens = vec![IntMatrix::identity(2), IntMatrix::identity(3)];
        assert!(explore(&gens, &ExplorationBudget::default()).is_err());
        assert!(explore(&[], &ExplorationBudget::default()).is_err());
    }

    #[test]
    fn infinite_order_search_outcomes() {
        match find_infinite_order_element(&s2_generators(), &ExplorationBudget::default())
            .unwrap()
        {
            InfiniteOrderSearch::Found { word, report } => {
                assert_eq!(word, vec![1]);
                assert_eq!(report.classification, Classification::LinearGrowth);
            }
            other => panic!("unexpected {other:?}"),
        }
        let fib = vec![
            IntMatrix::identity(2),
            IntMatrix::from_i64_rows(&[&[0, 1], &[1, 1]]),
        ];
        match find_infinite_order_element(&fib, &ExplorationBudget::default()).unwrap() {
            InfiniteOrderSearch::Found { word, report } => {
                assert_eq!(word, vec![1]);
                assert_eq!(report.classification, Classification::Expanding);
            }
            other => panic!("unexpected {other:?}"),
        }
        match find_infinite_order_element(&tm_generators(), &ExplorationBudget::default())
            .unwrap()
        {
            InfiniteOrderSearch::SemigroupFinite(2) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn witness_matrix_entries_eventually_increase() {
        let exploration = explore(&s2_generators(), &ExplorationBudget::default()).unwrap();
        let ExplorationStatus::Infinite { word, .. } = &exploration.status else {
            panic!("expected witness");
        };
        let mut matrix = IntMatrix::identity(2);
        for &d in word {
            matrix = matrix.mul(&s2_generators()[d as usize]);
        }
        let entries: Vec<_> = (1..=50).map(|n| matrix.pow(n).max_abs_entry()).collect();
        // strictly increasing from some point on
        let tail_start = entries
            .windows(2)
            .rposition(|w| w[0] >= w[1])
            .map_or(0, |i| i + 1);
        assert!(tail_start < 25, "tail starts too late: {tail_start}");
        for w in entries[tail_start..].windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn determinism() {
        let a = explore(&s2_generators(), &ExplorationBudget::default()).unwrap();
        let b = explore(&s2_generators(), &ExplorationBudget::default()).unwrap();
        let words_a: Vec<_> = a.elements.iter().map(|(w, _)| w.clone()).collect();
        let words_b: Vec<_> = b.elements.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(words_a, words_b);
        match (&a.status, &b.status) {
            (
                ExplorationStatus::Infinite { word: wa, .. },
                ExplorationStatus::Infinite { word: wb, .. },
            ) => assert_eq!(wa, wb),
            _ => panic!("both runs should find the same witness"),
        }
    }

    #[test]
    fn budget_trips_are_reported() {
        let tight = ExplorationBudget {
            max_elements: 3,
            max_entry_abs: BigInt::from(1_000_000),
        };
        // all-ones generator squares to growing entries; with a finite-order
        // second generator the element budget trips first here
        let gens = vec![
            IntMatrix::identity(2),
            IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
            IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]),
        ];
        let exploration = explore(&gens, &tight).unwrap();
        assert!(matches!(
            exploration.status,
            ExplorationStatus::BudgetExceeded(_)
        ));
    }

    #[test]
    fn spanning_prefix_examples() {
        let s2 = builtin(Builtin::DigitSum(2)).unwrap();
        let words: Vec<String> = spanning_prefixes(&s2)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["", "1"]);
        let images = [
            s2.row().to_vec(),
            s2.matrix(1).vec_mul(s2.row()),
        ];
        assert_eq!(images[0], vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(images[1], vec![BigInt::from(1), BigInt::from(1)]);

        let tm = builtin(Builtin::ThueMorse).unwrap();
        let words: Vec<String> = spanning_prefixes(&tm)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["", "1"]);

        let constant = LinearRepresentation::constant(2, BigInt::one()).unwrap();
        assert_eq!(spanning_prefixes(&constant).len(), 1);
    }

    #[test]
    fn spanning_images_are_independent_and_complete() {
        for rep in [
            builtin(Builtin::ThueMorse).unwrap(),
            builtin(Builtin::DigitSum(2)).unwrap(),
            builtin(Builtin::Lambda3).unwrap(),
        ] {
            let words = spanning_prefixes(&rep);
            let mut span = RowSpan::new(rep.dim());
            for w in &words {
                let mut v = rep.row().to_vec();
                for &d in w.digits() {
                    v = rep.matrix(d).vec_mul(&v);
                }
                assert!(span.insert(&v), "images must be independent");
            }
            // every image of a short word lies in the returned span
            let k = rep.base();
            let mut stack = vec![(rep.row().to_vec(), 0usize)];
            while let Some((v, depth)) = stack.pop() {
                assert!(span.contains(&v));
                if depth < 6 {
                    for digit in 0..k {
                        stack.push((rep.matrix(digit).vec_mul(&v), depth + 1));
                    }
                }
            }
        }
    }
}
