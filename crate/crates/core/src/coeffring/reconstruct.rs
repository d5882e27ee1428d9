use rug::{Float, Integer, Rational};

/// The rational of smallest denominator strictly between `lo` and `hi`
/// (`hi = None` stands for +infinity). Requires `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    if let Some(h) = hi {
        debug_assert!(lo < h);
        if *lo < 0 && *h > 0 {
            return Rational::new();
        }
        if *h <= 0 {
            let nlo = Rational::from(-h);
            let nhi = Rational::from(-lo);
            return -simplest_between(&nlo, Some(&nhi));
        }
    }
    // Continued-fraction descent; lo >= 0 from here on.
    let mut terms: Vec<Integer> = Vec::new();
    let mut lo = lo.clone();
    let mut hi = hi.cloned();
    let last = loop {
        let fl = lo.clone().floor().into_numer_denom().0;
        let next = Integer::from(&fl + 1u32);
        let fits = match &hi {
            None => true,
            Some(h) => next < *h,
        };
        if fits {
            break next;
        }
        // Both ends lie in [fl, fl + 1]; hi > fl since the interval is nonempty.
        let h = hi.take().expect("bounded");
        let lo_frac = Rational::from(&lo - &fl);
        let hi_frac = h - &fl;
        terms.push(fl);
        lo = hi_frac.recip();
        hi = if lo_frac == 0 { None } else { Some(lo_frac.recip()) };
    };
    let mut value = Rational::from(last);
    for a in terms.into_iter().rev() {
        value = value.recip() + a;
    }
    value
}

/// The unique fraction with denominator at most `den_bound` lying strictly within
/// `tol` of `approx`, or `None` when there is no such fraction or more than one.
pub fn rational_reconstruct(approx: &Float, den_bound: &Integer, tol: &Float) -> Option<Rational> {
    if *den_bound < 1 || !approx.is_finite() || !tol.is_finite() || *tol <= 0 {
        return None;
    }
    let a = approx.to_rational()?;
    let t = tol.to_rational()?;
    let lo = Rational::from(&a - &t);
    let hi = Rational::from(&a + &t);
    let best = simplest_between(&lo, Some(&hi));
    if best.denom() > den_bound {
        return None;
    }
    // Any competitor has denominator >= that of the simplest fraction on its side.
    let left = simplest_between(&lo, Some(&best));
    let right = simplest_between(&best, Some(&hi));
    if left.denom() <= den_bound || right.denom() <= den_bound {
        return None;
    }
    Some(best)
}
