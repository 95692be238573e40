package sim;

import sim.World;
import sim.Reaction;
import java.util.List;

public class Simulator {
    private World world;

    public void update(Agent agent) {
        Reaction reaction = world.getReaction(agent);
        String name = agent.getName();
        if (reaction.willReact()) {
            reaction.save(new Observer());
        }
    }

    public int describe(Agent agent) {
        int base = 1;
        int tick = world.getTick();
        int result = tick + base;
        return result;
    }

    public int sizeOf(List items) {
        int n = items.size();
        int m = n + 1;
        n = m;
        m = n;
        return n;
    }
}
