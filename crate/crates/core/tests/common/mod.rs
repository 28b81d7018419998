//! Independent counting oracles shared by the integration tests.

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mobius(n: u32) -> i64 {
    let (mut n, mut mu, mut f) = (n, 1, 2);
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            mu = -mu;
        }
        f += 1;
    }
    if n > 1 {
        -mu
    } else {
        mu
    }
}

fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// Witt's formula: the rank of the multidegree `alpha` part of the free Lie
/// ring, which is also the number of basic products of that multidegree.
pub fn witt(alpha: &[u32]) -> i64 {
    let n: u32 = alpha.iter().sum();
    if n == 0 {
        return 0;
    }
    let g = alpha.iter().fold(0, |a, &b| gcd(a, b));
    let mut total = 0i128;
    for d in (1..=g).filter(|d| g % d == 0) {
        let m = n / d;
        let multinomial = alpha.iter().fold(factorial(m), |acc, a| acc / factorial(a / d));
        total += mobius(d) as i128 * multinomial;
    }
    assert_eq!(total % n as i128, 0, "Witt sum not divisible for {alpha:?}");
    (total / n as i128) as i64
}
