use qc1d_core::measures::Piece;
use qc1d_core::spectral::band_spectrum;
use qc1d_core::subshifts::Substitution;
use qc1d_core::suspension::PieceAlphabet;

fn main() {
    let phi = 1.618033988749895;
    let alph = PieceAlphabet::from_pairs(vec![
        ('a', Piece::dirac(1.0, 0.0, 1.0).unwrap()),
        ('b', Piece::zero(phi).unwrap()),
    ]).unwrap();
    let subst = Substitution::fibonacci();
    for level in 5..=12 {
        let word = subst.iterate('a', level).unwrap();
        let t0 = std::time::Instant::now();
        let grid = (word.len() * 120).max(4000);
        let set = band_spectrum(&word, &alph, 0.0, 20.0, grid, 1e-8).unwrap();
        println!("level {level}: cells {}, grid {}, bands {}, total {:.9}, {:?}",
            word.len(), grid, set.bands().len(), set.total_length(), t0.elapsed());
    }
}
