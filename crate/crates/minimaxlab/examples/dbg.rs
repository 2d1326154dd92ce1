use minimaxlab::replication;
use std::time::Instant;

fn main() {
    for (name, f) in [
        ("region_figures", replication::region_figures as fn(u64, usize, usize) -> Result<(), String>),
    ] {
        let t = Instant::now();
        let r = f(42, 801, 2);
        println!("{name}: {:?} in {:.1?}", r.err().map(|e| e.chars().take(80).collect::<String>()), t.elapsed());
    }
    let t = Instant::now();
    let r = replication::thm_all_reproduction();
    println!("thm_all: {:?} in {:.1?}", r.err().map(|e| e.chars().take(120).collect::<String>()), t.elapsed());
    let t = Instant::now();
    let r = replication::failure_lrp_reproduction();
    println!("failure_lrp: {:?} in {:.1?}", r.err().map(|e| e.chars().take(80).collect::<String>()), t.elapsed());
    let t = Instant::now();
    let r = replication::envelope_danskin_suite();
    println!("envelope_danskin: {:?} in {:.1?}", r.err().map(|e| e.chars().take(80).collect::<String>()), t.elapsed());
    let t = Instant::now();
    let r = replication::verify_definition_suite();
    println!("verify_definitions: {:?} in {:.1?}", r.err().map(|e| e.chars().take(80).collect::<String>()), t.elapsed());
}
