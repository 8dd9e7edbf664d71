/// Neumaier compensated summation. Used where acceptance tolerances sit near
/// f64 round-off (Parseval checks, long Stieltjes sums).
pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in items {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::kahan_sum;

    #[test]
    fn compensates_cancellation() {
        let xs = [1.0e16, 1.0, -1.0e16, 1.0];
        assert_eq!(kahan_sum(xs.iter().copied()), 2.0);
    }
}
