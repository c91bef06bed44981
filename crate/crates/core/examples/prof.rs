use addbound::numeric::interval::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::time::Instant;

fn main() {
    let five = BigRational::from(BigInt::from(5));
    let t = Instant::now();
    let ln5 = ln_rat_enclosure(&five, 96).unwrap();
    println!("ln5: {:?} (denom bits {})", t.elapsed(), ln5.hi.denom().bits());
    let arg = RatInterval::point(BigRational::from(BigInt::from(3))).div(&ln5).unwrap();
    println!("arg denom bits: {}", arg.hi.denom().bits());
    let t = Instant::now();
    let lnarg = ln_interval(&arg, 96).unwrap();
    println!("ln(arg): {:?} (denom bits {})", t.elapsed(), lnarg.hi.denom().bits());
    let t = Instant::now();
    let q = lnarg.div(&ln5).unwrap();
    let br = RatInterval::one().add(&q.scale(&BigRational::from(BigInt::from(3))));
    let p4 = br.pow(4);
    let m = p4.mul(&br).mul(&lnarg).mul(&p4);
    println!("bracket+pow+muls: {:?} (bits {})", t.elapsed(), m.hi.denom().bits());
}
