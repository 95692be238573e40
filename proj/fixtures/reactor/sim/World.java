package sim;

import sim.Reaction;

public class World {
    private Reaction current;
    private int tick;

    public Reaction getReaction(Agent agent) {
        Reaction r = current;
        return r;
    }

    public int getTick() {
        return tick;
    }
}

class WorldStats {
    public int count() {
        return 0;
    }
}
