//! Shared workloads for the criterion benches.

use vqbrowse_core::{Field, OrderMode, Query};

/// A fixed rotation of query shapes covering each ordering mode.
pub fn query_mix() -> Vec<Query> {
    let sel = vqbrowse_core::wire::selection;
    vec![
        Query::default(),
        Query::default().text(Field::Question, "milk"),
        Query::default().text(Field::Question, "what color"),
        Query::default().text(Field::Captions, "\"carton of milk\""),
        Query::default()
            .text(Field::Answers, "yes no")
            .order_by(OrderMode::AnswerDiversity),
        Query::default()
            .select(sel("answer_difference.DFF"))
            .select(sel("quality_issues.ROT")),
        Query::default()
            .text(Field::Question, "glass")
            .select(sel("skills.TXT.3"))
            .page(1),
        Query::default().order_by(OrderMode::AnswerDiversity),
    ]
}
