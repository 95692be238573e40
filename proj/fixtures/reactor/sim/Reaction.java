package sim;

public class Reaction {
    private String label;

    public boolean willReact() {
        return label != null;
    }

    public void save(Observer obs) {
        obs.record(label);
    }
}
