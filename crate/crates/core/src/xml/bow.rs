use std::collections::HashMap;

/// Token interval `[start_token, end_token]` (inclusive) and its
/// bag-of-words distance to the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalMatch {
    pub start_token: usize,
    pub end_token: usize,
    pub distance: usize,
}

/// Finds the token interval whose multiset of words is closest to the
/// table's words, where distance counts table words missing from the
/// interval plus interval words not in the table.
///
/// For every start position a difference counter is reset to the table
/// bag and decremented token by token; counts may go negative for words
/// that occur more often on the page. The first interval (by start, then
/// end) reaching the smallest distance wins. O(n(n+m)) for n page tokens
/// and m table words. Returns `None` only for an empty page.
pub fn bag_of_words_interval<S: AsRef<str>, T: AsRef<str>>(
    table_words: &[S],
    page_tokens: &[T],
) -> Option<IntervalMatch> {
    let mut vocab: HashMap<&str, usize> = HashMap::new();
    for w in table_words
        .iter()
        .map(AsRef::as_ref)
        .chain(page_tokens.iter().map(AsRef::as_ref))
    {
        let next = vocab.len();
        vocab.entry(w).or_insert(next);
    }
    let table_ids: Vec<usize> = table_words.iter().map(|w| vocab[w.as_ref()]).collect();
    let page_ids: Vec<usize> = page_tokens.iter().map(|w| vocab[w.as_ref()]).collect();
    let vocab_size = vocab.len();

    let mut table_bag = vec![0i64; vocab_size];
    for &id in &table_ids {
        table_bag[id] += 1;
    }
    let table_len = table_ids.len() as i64;

    let mut best: Option<(i64, usize, usize)> = None;
    let mut diff = vec![0i64; vocab_size];
    for start in 0..page_ids.len() {
        diff.copy_from_slice(&table_bag);
        let mut cur = table_len;
        for (end, &id) in page_ids.iter().enumerate().skip(start) {
            diff[id] -= 1;
            if diff[id] >= 0 {
                cur -= 1;
            } else {
                cur += 1;
            }
            if best.map_or(true, |(d, _, _)| cur < d) {
                best = Some((cur, start, end));
            }
        }
    }
    best.map(|(d, start_token, end_token)| IntervalMatch {
        start_token,
        end_token,
        distance: d as usize,
    })
}
