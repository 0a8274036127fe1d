//! Guess a P-recursive recurrence from 40 terms, then use it to extend to 200.

use childstats::child_set::ChildSet;
use childstats::lagrange::{count_trees, numerator_sequence};
use childstats::recurrence::{extend_sequence, guess_recurrence, Sequence};

fn main() -> Result<(), childstats::error::Error> {
    let set: ChildSet = "0,1,2".parse()?;
    let f = Sequence::new(1, (1..=40).map(|n| count_trees(&set, n)).collect());
    let rec = guess_recurrence(&f, 4, 4)?.expect("tree counts are P-recursive");
    println!("f_n:      {rec}");

    let ext = extend_sequence(&rec, &Sequence::new(1, f.terms[..2].to_vec()), 200)?;
    let f200 = ext.integers().expect("integral")[199].clone();
    assert_eq!(f200, count_trees(&set, 200));
    println!("f_200 from the recurrence matches direct counting ({} digits)", f200.to_string().len());

    for s in [0, 1, 2] {
        let col = numerator_sequence(&set, s, None, 1, 0, 40)?.column(1, 0);
        match guess_recurrence(&Sequence::new(1, col), 4, 4)? {
            Some(r) => println!("N_1(X_{s}): {r}"),
            None => println!("N_1(X_{s}): none within bounds"),
        }
    }
    Ok(())
}
