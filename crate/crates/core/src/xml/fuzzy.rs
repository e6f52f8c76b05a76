/// Best approximate occurrence of a needle inside a haystack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzyMatch {
    /// Inclusive char offset.
    pub start: usize,
    /// Exclusive char offset.
    pub end: usize,
    pub distance: usize,
}

/// Finds the substring of `haystack` with the smallest Levenshtein distance
/// to `needle`.
///
/// Wagner-Fischer with a free start (the first row is all zeros) and a free
/// end (the answer is the minimum of the last row), so it stays O(mn).
/// Ties go to the smallest end, then the shortest span.
pub fn fuzzy_substring(needle: &[char], haystack: &[char]) -> FuzzyMatch {
    let n = haystack.len();
    // (distance, start) per haystack column; start is the largest start
    // among optimal alignments ending in that cell.
    let mut prev: Vec<(usize, usize)> = (0..=n).map(|j| (0, j)).collect();
    let mut cur = vec![(0usize, 0usize); n + 1];
    for (i, &nc) in needle.iter().enumerate() {
        cur[0] = (i + 1, 0);
        for j in 1..=n {
            let sub = usize::from(nc != haystack[j - 1]);
            let candidates = [
                (prev[j - 1].0 + sub, prev[j - 1].1),
                (prev[j].0 + 1, prev[j].1),
                (cur[j - 1].0 + 1, cur[j - 1].1),
            ];
            cur[j] = candidates
                .into_iter()
                .reduce(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 > a.1) { b } else { a })
                .unwrap();
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (end, &(distance, start)) = prev
        .iter()
        .enumerate()
        .min_by_key(|&(j, &(d, _))| (d, j))
        .expect("row has at least one cell");
    FuzzyMatch { start, end, distance }
}

/// Plain Levenshtein distance with unit costs.
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ac) in a.iter().enumerate() {
        cur[0] = i + 1;
        for j in 1..=b.len() {
            cur[j] = (prev[j - 1] + usize::from(ac != b[j - 1]))
                .min(prev[j] + 1)
                .min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
