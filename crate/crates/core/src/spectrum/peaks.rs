#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub omega: f64,
    pub height: f64,
}

/// Strict local maxima of `slice` sampled on `omega_axis`, highest first.
///
/// A plateau counts as one peak, reported at its leftmost cell, when both
/// cells flanking it are lower. End cells are never peaks.
pub fn find_peaks(omega_axis: &[f64], slice: &[f64]) -> Vec<Peak> {
    debug_assert_eq!(omega_axis.len(), slice.len());
    let n = slice.len();
    let mut peaks = Vec::new();
    if n < 3 {
        return peaks;
    }
    let mut i = 1;
    while i + 1 < n {
        let v = slice[i];
        if slice[i - 1] >= v {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && slice[j + 1] == v {
            j += 1;
        }
        if j + 1 < n && slice[j + 1] < v {
            peaks.push(Peak {
                index: i,
                omega: omega_axis[i],
                height: v,
            });
        }
        i = j + 1;
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height).then(a.index.cmp(&b.index)));
    peaks
}
