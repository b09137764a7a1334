//! Scores documents against a cluster's word counts with the
//! Dirichlet-multinomial predictive.

use mpdhp::text::{doc_log_likelihood, ClusterWordCounts, DocumentCounts};

fn main() -> mpdhp::Result<()> {
    let vocab = 100;
    let theta0 = 0.01;
    let mut sports = ClusterWordCounts::new();
    for doc in [[1, 2, 3, 1], [2, 3, 4, 2], [1, 1, 4, 3]] {
        sports.add_document(&DocumentCounts::from_tokens(&doc)?);
    }
    let on_topic = DocumentCounts::from_tokens(&[1, 2, 3])?;
    let off_topic = DocumentCounts::from_tokens(&[70, 71, 72])?;
    let empty = ClusterWordCounts::new();
    for (name, doc) in [("on topic", &on_topic), ("off topic", &off_topic)] {
        println!(
            "{name:>9}: log p = {:8.3} given the cluster, {:8.3} given an empty cluster",
            doc_log_likelihood(&sports, doc, theta0, vocab),
            doc_log_likelihood(&empty, doc, theta0, vocab)
        );
    }
    println!("top words: {:?}", sports.top_tokens(3));
    Ok(())
}
