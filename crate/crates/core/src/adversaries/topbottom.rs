use crate::model::{Answer, ElementId, Query, Scenario, Transcript};

use super::{Adversary, AdversaryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Unassigned,
    Top,
    Bottom,
}

/// Splits elements by the outcome of their first comparison and always lets
/// a TOP element beat a BOTTOM one.
///
/// The implied global order is `top_order`, then the untouched elements,
/// then `bottom_order` (each list biggest first). New TOP members enter at the
/// bottom of the TOP block and new BOTTOM members at the top of the BOTTOM
/// block, so earlier answers stay true as the order grows.
#[derive(Debug, Clone)]
pub struct TopBottom {
    membership: Vec<Membership>,
    top_order: Vec<ElementId>,
    bottom_order: Vec<ElementId>,
}

impl TopBottom {
    pub fn new(n: usize) -> Self {
        TopBottom {
            membership: vec![Membership::Unassigned; n],
            top_order: Vec::new(),
            bottom_order: Vec::new(),
        }
    }

    pub fn membership(&self, e: ElementId) -> Membership {
        self.membership[e.0]
    }

    /// Size of TOP.
    pub fn n1(&self) -> usize {
        self.top_order.len()
    }

    /// Size of BOTTOM.
    pub fn n2(&self) -> usize {
        self.bottom_order.len()
    }

    pub fn top_order(&self) -> &[ElementId] {
        &self.top_order
    }

    pub fn bottom_order(&self) -> &[ElementId] {
        &self.bottom_order
    }

    fn join_top(&mut self, e: ElementId) {
        self.membership[e.0] = Membership::Top;
        self.top_order.push(e);
    }

    fn join_bottom(&mut self, e: ElementId) {
        self.membership[e.0] = Membership::Bottom;
        self.bottom_order.insert(0, e);
    }

    fn position(order: &[ElementId], e: ElementId) -> usize {
        order
            .iter()
            .position(|&x| x == e)
            .expect("assigned element is listed in its block")
    }

    pub fn topbottom_answer(&mut self, query: Query) -> Answer {
        use Membership::*;
        let (a, b) = (query.first(), query.second());
        match (self.membership(a), self.membership(b)) {
            (Top, Bottom) | (Top, Unassigned) => {
                if self.membership(b) == Unassigned {
                    self.join_bottom(b);
                }
                Answer::First
            }
            (Bottom, Top) | (Unassigned, Top) => {
                if self.membership(a) == Unassigned {
                    self.join_bottom(a);
                }
                Answer::Second
            }
            (Unassigned, Bottom) => {
                self.join_top(a);
                Answer::First
            }
            (Bottom, Unassigned) => {
                self.join_top(b);
                Answer::Second
            }
            (Unassigned, Unassigned) => {
                self.join_top(a);
                self.join_bottom(b);
                Answer::First
            }
            (Top, Top) => {
                if Self::position(&self.top_order, a) < Self::position(&self.top_order, b) {
                    Answer::First
                } else {
                    Answer::Second
                }
            }
            (Bottom, Bottom) => {
                if Self::position(&self.bottom_order, a) < Self::position(&self.bottom_order, b) {
                    Answer::First
                } else {
                    Answer::Second
                }
            }
        }
    }
}

impl Adversary for TopBottom {
    fn name(&self) -> String {
        "topbottom".into()
    }

    fn answer(&mut self, _transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError> {
        Ok(self.topbottom_answer(query))
    }

    fn committed_scenario(&self) -> Scenario {
        let mut order: Vec<usize> = self.top_order.iter().map(|e| e.0).collect();
        order.extend(
            (0..self.membership.len()).filter(|&e| self.membership[e] == Membership::Unassigned),
        );
        order.extend(self.bottom_order.iter().map(|e| e.0));
        Scenario::from_descending(&order).expect("blocks partition the ground set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ComparisonGraph;
    use crate::model::lie_count;
    use proptest::prelude::*;

    fn q(a: usize, b: usize) -> Query {
        Query::new(a, b).unwrap()
    }

    #[test]
    fn fresh_pair_assigns_membership() {
        let mut adv = TopBottom::new(6);
        assert_eq!(adv.topbottom_answer(q(3, 5)), Answer::First);
        assert_eq!(adv.membership(ElementId(3)), Membership::Top);
        assert_eq!(adv.membership(ElementId(5)), Membership::Bottom);
        assert_eq!((adv.n1(), adv.n2()), (1, 1));
        assert_eq!(adv.topbottom_answer(q(3, 5)), Answer::First);
        assert_eq!(adv.topbottom_answer(q(5, 3)), Answer::Second);
    }

    #[test]
    fn fresh_element_loses_to_top_without_raising_top_in_degree() {
        let n = 4;
        let mut adv = TopBottom::new(n);
        let mut t = Transcript::new(n);
        for query in [q(0, 1), q(2, 0)] {
            let ans = adv.answer(&t, query).unwrap();
            t.push(query, ans).unwrap();
        }
        assert_eq!(t.entries()[1].1, Answer::Second);
        assert_eq!(adv.membership(ElementId(2)), Membership::Bottom);
        let g = ComparisonGraph::from_transcript(&t);
        assert!(g.is_consistent());
        assert_eq!(g.in_degree(ElementId(0)), 0);
        // 2 enters BOTTOM above 1
        assert_eq!(adv.bottom_order(), &[ElementId(2), ElementId(1)]);
    }

    #[test]
    fn fresh_element_beats_bottom_and_joins_top() {
        let mut adv = TopBottom::new(3);
        adv.topbottom_answer(q(0, 1));
        assert_eq!(adv.topbottom_answer(q(1, 2)), Answer::Second);
        assert_eq!(adv.membership(ElementId(2)), Membership::Top);
        assert_eq!(adv.top_order(), &[ElementId(0), ElementId(2)]);
    }

    #[test]
    fn perfect_matching_prefix_splits_in_half() {
        let n = 6;
        let mut adv = TopBottom::new(n);
        for (a, b) in [(0, 1), (3, 2), (4, 5)] {
            adv.topbottom_answer(q(a, b));
        }
        assert_eq!((adv.n1(), adv.n2()), (3, 3));
        for top in [0, 3, 4] {
            for bottom in [1, 2, 5] {
                assert_eq!(adv.topbottom_answer(q(bottom, top)), Answer::Second);
            }
        }
    }

    proptest! {
        #[test]
        fn answers_stay_consistent_and_blocks_stay_separated(
            n in 2usize..8,
            raw in proptest::collection::vec((0usize..8, 0usize..8), 0..60),
        ) {
            let mut adv = TopBottom::new(n);
            let mut t = Transcript::new(n);
            for (a, b) in raw {
                let (a, b) = (a % n, b % n);
                if a == b { continue; }
                let query = q(a, b);
                let before = ComparisonGraph::from_transcript(&t);
                let ans = adv.answer(&t, query).unwrap();
                t.push(query, ans).unwrap();
                let after = ComparisonGraph::from_transcript(&t);
                let both = |m| adv.membership(ElementId(a)) == m && adv.membership(ElementId(b)) == m;
                for v in 0..n {
                    let v = ElementId(v);
                    if adv.membership(v) == Membership::Top && before.touched(v) && !both(Membership::Top) {
                        prop_assert_eq!(before.in_degree(v), after.in_degree(v));
                    }
                    if adv.membership(v) == Membership::Bottom && before.touched(v) && !both(Membership::Bottom) {
                        prop_assert_eq!(before.out_degree(v), after.out_degree(v));
                    }
                }
            }
            let x = adv.committed_scenario();
            prop_assert_eq!(lie_count(&t, &x), 0);
            prop_assert!(ComparisonGraph::from_transcript(&t).is_consistent());
            for &top in adv.top_order() {
                for &bottom in adv.bottom_order() {
                    prop_assert!(x.is_above(top, bottom));
                }
            }
            let touched = (0..n).filter(|&v| ComparisonGraph::from_transcript(&t).touched(ElementId(v))).count();
            prop_assert_eq!(adv.n1() + adv.n2(), touched);
        }
    }
}
